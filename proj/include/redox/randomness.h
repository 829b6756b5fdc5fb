#pragma once

#include <cstdint>

#include <json.hpp>

#include "redox/cluster.h"

namespace redox {

// Counting bound for one virtual chunk: redirection maps at most (G!)^K
// original orders onto each output order, so at least (F/M)!/(G!)^K distinct
// output orders remain reachable.
struct RandomnessBound {
  uint64_t files = 0;           // F
  uint64_t virtual_chunks = 0;  // M
  uint64_t chunk_size = 0;      // K
  uint64_t pcs_size = 0;        // G = F/(K*M)
  uint64_t per_vc_files = 0;    // F/M

  double log10_full = 0;         // log10((F/M)!)
  double log10_divisor = 0;      // log10((G!)^K)
  double log10_lower_bound = 0;  // difference

  // Exact integer evaluation of the bound, available when F/M <= 20.
  bool exact_available = false;
  uint64_t exact_lower_bound = 0;

  nlohmann::json to_json() const;
};

RandomnessBound compute_bound(uint64_t files, uint64_t virtual_chunks, uint64_t chunk_size);

// Exhaustive oracle: runs the local protocol (first-maximum tie-break) over
// every input permutation of one VC's files and counts distinct delivery
// sequences. Guarded to (F/M)! <= 10^6.
uint64_t enumerate_reachable(uint64_t per_vc_files, uint64_t chunk_size);

struct UniformityReport {
  uint64_t trials = 0;
  double alpha = 0;
  // (a) order in which the G physical chunks are first loaded, over G! bins
  double p_first_load_order = 0;
  uint64_t order_bins = 0;
  bool flagged_order = false;
  // (b) identity of the first delivered file, over K*G bins
  double p_first_delivery = 0;
  uint64_t delivery_bins = 0;
  bool flagged_delivery = false;

  nlohmann::json to_json() const;
};

// Statistical diagnostics over seeded single-VC trials; diagnostic only,
// never a pass/fail gate.
UniformityReport position_uniformity(uint64_t chunk_size, uint64_t pcs_size,
                                     uint64_t trials, double alpha, uint64_t seed,
                                     RefillPolicy policy = RefillPolicy::greedy);

}  // namespace redox
