#pragma once

#include <string>

#include "json.hpp"

#include "fqm/lifts.hpp"
#include "fqm/oldnew.hpp"

namespace fqm {

using Json = nlohmann::ordered_json;

// lattice input: {"gram": [[...], ...]} with integer entries
ZMat parse_lattice_json(const Json& j);

// coefficient table:
// {"form": "<jordan>" | {"gram": ...}, "weight": k, "level": N, "sturm": S,
//  "basis": [{"components": {"<gamma index>": ["p/q" | number, ...]}}]}
struct ParsedTable {
    CoeffTable table;
    FiniteQuadraticModule form;
};
ParsedTable parse_coeff_table_json(const Json& j);

Json report_to_json(const Report& r);
Json split_to_json(const SplitBases& s);
Json certificate_to_json(const Certificate& c);
Json hypothesis_to_json(const HypothesisCheck& h, const SizeGateCheck& gate);

Json rational_vec_to_json(const QVec& v);
Json rational_mat_to_json(const QMat& m);
Json double_mat_to_json(const std::vector<std::vector<double>>& m);

Json load_json_file(const std::string& path);

} // namespace fqm
