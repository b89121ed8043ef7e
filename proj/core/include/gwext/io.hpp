#pragma once

#include <string>
#include <vector>

#include "gwext/process.hpp"
#include "gwext/types.hpp"

namespace gwext {

// Finite typeset loaded from JSON:
// {
//   "name": "...",
//   "types": ["a", "b", ...],
//   "laws": {
//     "a": {"form": "product",
//           "components": [{"child": "b", "law": "bernoulli", "p": 0.5},
//                          {"child": "a", "law": "geometric", "mean": 1.5},
//                          {"child": "b", "law": "deterministic", "n": 2},
//                          {"child": "a", "law": "explicit",
//                           "pmf": [[0, 0.5], [3, 0.5]]}]},
//     "b": {"form": "explicit",
//           "outcomes": [{"prob": 0.5, "children": {}},
//                        {"prob": 0.5, "children": {"b": 3}}]}
//   }
// }
struct LoadedProcess {
    ProcessSpec spec;
    std::vector<std::string> type_names;

    TypeId type_by_name(const std::string& name) const;
    // Subset from a comma-separated list of type names, or "all".
    SubsetSpec subset_from_list(const std::string& csv) const;
};

LoadedProcess load_process_json(const std::string& path);
LoadedProcess parse_process_json(const std::string& text);

}  // namespace gwext
