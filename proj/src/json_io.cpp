#include "efxo/json_io.hpp"

namespace efxo {

namespace {

Rational rational_field(const Json& doc, const char* key) {
    if (!doc.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
    const auto& v = doc.at(key);
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    throw FormatError(std::string("field '") + key + "' must be an integer or a \"p/q\" string");
}

std::size_t index_field(const Json& doc, const char* key) {
    if (!doc.contains(key) || !doc.at(key).is_number_integer() || doc.at(key).get<std::int64_t>() < 0) {
        throw FormatError(std::string("field '") + key + "' must be a non-negative integer");
    }
    return doc.at(key).get<std::size_t>();
}

}  // namespace

Json instance_to_json(const Instance& inst) {
    Json doc;
    doc["alpha"] = format_rational(inst.alpha());
    doc["beta"] = format_rational(inst.beta());
    doc["vertices"] = inst.n();
    Json edges = Json::array();
    for (const auto& e : inst.edges()) {
        Json item;
        item["u"] = e.u;
        item["v"] = e.v;
        item["w"] = e.is_heavy() ? "heavy" : "light";
        edges.push_back(std::move(item));
    }
    doc["edges"] = std::move(edges);
    return doc;
}

Instance instance_from_json(const Json& doc) {
    if (!doc.is_object()) throw FormatError("instance must be a JSON object");
    Rational alpha = rational_field(doc, "alpha");
    Rational beta = rational_field(doc, "beta");
    std::size_t n = index_field(doc, "vertices");
    if (!doc.contains("edges") || !doc.at("edges").is_array()) {
        throw FormatError("field 'edges' must be an array");
    }
    std::vector<EdgeSpec> specs;
    for (const auto& item : doc.at("edges")) {
        if (!item.is_object()) throw FormatError("edge entries must be objects");
        std::string w = item.value("w", std::string{});
        if (w != "heavy" && w != "light") throw FormatError("edge weight must be \"heavy\" or \"light\"");
        specs.push_back({index_field(item, "u"), index_field(item, "v"),
                         w == "heavy" ? EdgeClass::Heavy : EdgeClass::Light});
    }
    try {
        return Instance::create(n, alpha, beta, specs);
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

Json orientation_to_json(const PartialOrientation& pi) {
    Json owners = Json::array();
    for (const auto& o : pi.owners()) {
        if (o) {
            owners.push_back(*o);
        } else {
            owners.push_back(nullptr);
        }
    }
    Json doc;
    doc["owners"] = std::move(owners);
    return doc;
}

PartialOrientation orientation_from_json(const Instance& inst, const Json& doc) {
    if (!doc.is_object() || !doc.contains("owners") || !doc.at("owners").is_array()) {
        throw FormatError("orientation must be an object with an 'owners' array");
    }
    std::vector<std::optional<VertexId>> owners;
    for (const auto& o : doc.at("owners")) {
        if (o.is_null()) {
            owners.emplace_back();
        } else if (o.is_number_integer() && o.get<std::int64_t>() >= 0) {
            owners.emplace_back(o.get<std::size_t>());
        } else {
            throw FormatError("owners entries must be vertex indices or null");
        }
    }
    try {
        return PartialOrientation::from_owners(inst, std::move(owners));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

Json envy_report_to_json(const EnvyReport& report) {
    Json pairs = Json::array();
    for (VertexId i = 0; i < report.n(); ++i) {
        for (VertexId j = 0; j < report.n(); ++j) {
            if (i == j) continue;
            const auto& cell = report.at(i, j);
            if (!cell.envies) continue;
            Json item;
            item["i"] = i;
            item["j"] = j;
            item["envies"] = cell.envies;
            item["strongly_envies"] = cell.strongly_envies;
            item["witness_edge"] = cell.witness_edge ? Json(*cell.witness_edge) : Json(nullptr);
            pairs.push_back(std::move(item));
        }
    }
    Json doc;
    doc["ef"] = report.is_ef();
    doc["efx"] = report.is_efx();
    doc["pairs"] = std::move(pairs);
    return doc;
}

Json classification_to_json(const Instance& inst, const std::vector<HeavyComponentInfo>& infos) {
    Json comps = Json::array();
    bool forbidden = false;
    for (const auto& info : infos) {
        Json item;
        item["vertices"] = info.vertices;
        item["label"] = label(info.classification);
        if (const auto* t1 = std::get_if<Type1>(&info.classification)) {
            item["special_pair"] = {t1->v, t1->w};
        } else if (const auto* t2 = std::get_if<Type2>(&info.classification)) {
            Json witness;
            if (const auto* loop = std::get_if<HeavySelfLoop>(&t2->witness)) {
                witness["kind"] = "heavy_self_loop";
                witness["vertex"] = loop->vertex;
                witness["edge"] = loop->edge;
            } else {
                const auto& nt = std::get<NonTreeHeavyEdge>(t2->witness);
                witness["kind"] = "non_tree_heavy_edge";
                witness["edge"] = nt.edge;
                witness["root"] = nt.root;
            }
            item["witness"] = std::move(witness);
        }
        item["heavy_spanning_tree"] = info.heavy_spanning_tree;
        forbidden = forbidden || info.is_forbidden();
        comps.push_back(std::move(item));
    }
    Json doc;
    doc["vertices"] = inst.n();
    doc["edges"] = inst.m();
    doc["multiplicity"] = multiplicity(inst);
    doc["connected_components"] = connected_components(inst).size();
    doc["bipartite"] = is_bipartite(inst).has_value();
    doc["forbidden_structure"] = forbidden;
    doc["heavy_components"] = std::move(comps);
    return doc;
}

Json reduction_map_to_json(const ReductionMap& map) {
    Json doc;
    doc["circuit"] = format_circuit(map.circuit);
    doc["q"] = map.q;
    doc["alpha"] = format_rational(map.alpha);
    doc["beta"] = format_rational(map.beta);
    Json wires = Json::object();
    for (const auto& [name, copies] : map.wires) {
        Json list = Json::array();
        for (const auto& w : copies) list.push_back({{"edge", w.edge}, {"red", w.red}, {"black", w.black}});
        wires[name] = std::move(list);
    }
    doc["wires"] = std::move(wires);
    Json colors = Json::array();
    for (Color c : map.colors) colors.push_back(c == Color::Red ? "red" : "black");
    doc["colors"] = std::move(colors);
    Json gadgets = Json::array();
    for (const auto& g : map.gadgets) {
        Json item;
        item["kind"] = gadget_name(g.kind);
        item["vertices"] = g.vertices;
        item["edges"] = g.edges;
        item["ports"] = g.ports;
        gadgets.push_back(std::move(item));
    }
    doc["gadgets"] = std::move(gadgets);
    return doc;
}

Json reduction_report_to_json(const ReductionReport& report) {
    Json doc;
    doc["bipartite"] = report.bipartite;
    doc["weights"] = report.weights;
    doc["multiplicity"] = report.multiplicity;
    doc["odd_multitrees"] = report.odd_multitrees;
    doc["all"] = report.all();
    return doc;
}

std::string dump_canonical(const Json& doc) { return doc.dump() + "\n"; }

Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace efxo
