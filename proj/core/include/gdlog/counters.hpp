#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace gdlog {

/// Operation counters for complexity checks. Counts are machine independent;
/// wall time is reported separately.
struct Counters {
  uint64_t iterations = 0;       // choices made (Step 3 executions)
  uint64_t rule_firings = 0;     // successful body instantiations
  uint64_t index_probes = 0;     // hash index lookups during joins
  uint64_t tuples_scanned = 0;   // rows visited by joins
  uint64_t arcs_explored = 0;    // rows visited for the first body atom of a choice rule
  uint64_t conflict_checks = 0;
  uint64_t theta_inserts = 0;
  uint64_t theta_deletes = 0;
  uint64_t select_scan_steps = 0;  // linear scans for an extreme tuple
  uint64_t pq_ops = 0;           // heap push / pop / erase / update
  uint64_t pq_steps = 0;         // heap sift comparisons
  uint64_t closure_rounds = 0;

  /// Sum of the elementary steps: the signal used for slope fitting.
  uint64_t work() const {
    return index_probes + tuples_scanned + conflict_checks + theta_inserts + theta_deletes +
           select_scan_steps + pq_steps;
  }

  std::map<std::string, uint64_t> as_map() const {
    return {{"iterations", iterations},         {"rule_firings", rule_firings},
            {"index_probes", index_probes},     {"tuples_scanned", tuples_scanned},
            {"arcs_explored", arcs_explored},   {"conflict_checks", conflict_checks},
            {"theta_inserts", theta_inserts},   {"theta_deletes", theta_deletes},
            {"select_scan_steps", select_scan_steps}, {"pq_ops", pq_ops},
            {"pq_steps", pq_steps},             {"closure_rounds", closure_rounds},
            {"work", work()}};
  }
};

}  // namespace gdlog
