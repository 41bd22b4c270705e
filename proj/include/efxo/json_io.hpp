#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "efxo/fairness.hpp"
#include "efxo/multigraph.hpp"
#include "efxo/reduction.hpp"
#include "efxo/structure.hpp"

namespace efxo {

using Json = nlohmann::ordered_json;

/// Malformed or invalid input document.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// {"alpha":"<p/q>","beta":"...","vertices":N,"edges":[{"u":i,"v":j,"w":"heavy"|"light"}]}
Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& doc);

/// {"owners":[o_0, ..., o_{m-1}]} with null for unoriented edges.
Json orientation_to_json(const PartialOrientation& pi);
PartialOrientation orientation_from_json(const Instance& inst, const Json& doc);

/// Lists only pairs with envy; omitted pairs do not envy.
Json envy_report_to_json(const EnvyReport& report);

Json classification_to_json(const Instance& inst, const std::vector<HeavyComponentInfo>& infos);

/// Circuit text, weights, wire copies, vertex colours and gadget records.
Json reduction_map_to_json(const ReductionMap& map);

Json reduction_report_to_json(const ReductionReport& report);

/// Canonical single-line text; parsing and re-dumping is byte-identical.
std::string dump_canonical(const Json& doc);

Json parse_json_text(const std::string& text);

}  // namespace efxo
