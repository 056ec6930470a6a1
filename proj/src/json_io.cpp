#include "fqm/json_io.hpp"

#include <fstream>
#include <sstream>

namespace fqm {

ZMat parse_lattice_json(const Json& j) {
    if (!j.is_object() || !j.contains("gram") || !j["gram"].is_array())
        throw ValidationError("lattice JSON must be {\"gram\": [[...], ...]}");
    ZMat gram;
    for (const auto& row : j["gram"]) {
        if (!row.is_array()) throw ValidationError("lattice gram rows must be arrays");
        std::vector<Integer> r;
        for (const auto& v : row) {
            if (!v.is_number_integer())
                throw ValidationError("lattice gram entries must be integers");
            r.emplace_back((long)v.get<long long>());
        }
        gram.push_back(std::move(r));
    }
    return gram;
}

namespace {

Rational coeff_from_json(const Json& v, bool* exact) {
    if (v.is_string()) return rational_from_string(v.get<std::string>());
    if (v.is_number_integer()) return Rational((long)v.get<long long>());
    if (v.is_number_float()) {
        *exact = false;
        Rational r;
        // exact binary value of the double; comparisons downstream use 1e-9
        mpq_set_d(r.get_mpq_t(), v.get<double>());
        return r;
    }
    throw ValidationError("coefficients must be strings \"p/q\" or numbers");
}

} // namespace

ParsedTable parse_coeff_table_json(const Json& j) {
    ParsedTable out;
    if (!j.is_object()) throw ValidationError("coefficient table must be a JSON object");
    for (const char* key : {"form", "weight", "level", "sturm", "basis"})
        if (!j.contains(key))
            throw ValidationError(std::string("coefficient table missing key '") + key + "'");

    if (j["form"].is_string()) {
        out.table.descriptor = j["form"].get<std::string>();
        out.form = from_jordan(out.table.descriptor);
    } else {
        out.table.descriptor = "lattice";
        out.form = from_even_lattice(parse_lattice_json(j["form"]));
    }
    out.table.weight = j["weight"].get<long long>();
    out.table.level = j["level"].get<long long>();
    out.table.sturm = j["sturm"].get<long long>();
    if (!j["basis"].is_array()) throw ValidationError("'basis' must be an array of forms");
    for (const auto& fj : j["basis"]) {
        if (!fj.is_object() || !fj.contains("components"))
            throw ValidationError("each basis form needs a 'components' object");
        std::map<long, QVec> comp;
        for (const auto& [key, arr] : fj["components"].items()) {
            long idx;
            try {
                idx = std::stol(key);
            } catch (const std::exception&) {
                throw ValidationError("component keys must be element indices, got '" + key + "'");
            }
            if (!arr.is_array()) throw ValidationError("component values must be arrays");
            QVec coeffs;
            for (const auto& v : arr) coeffs.push_back(coeff_from_json(v, &out.table.exact));
            comp[idx] = std::move(coeffs);
        }
        out.table.forms.push_back(std::move(comp));
    }
    validate_table(out.table, out.form);
    return out;
}

Json report_to_json(const Report& r) {
    Json checks = Json::array();
    for (const auto& c : r) {
        Json e;
        e["check"] = c.check;
        e["status"] = c.pass ? "pass" : "fail";
        if (!c.pass) e["counterexample"] = c.counterexample;
        checks.push_back(e);
    }
    Json out;
    out["checks"] = checks;
    out["all_pass"] = report_all_pass(r);
    return out;
}

Json rational_vec_to_json(const QVec& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(rational_to_string(x));
    return a;
}

Json rational_mat_to_json(const QMat& m) {
    Json a = Json::array();
    for (const auto& row : m) a.push_back(rational_vec_to_json(row));
    return a;
}

Json double_mat_to_json(const std::vector<std::vector<double>>& m) {
    Json a = Json::array();
    for (const auto& row : m) {
        Json r = Json::array();
        for (double x : row) r.push_back(x);
        a.push_back(r);
    }
    return a;
}

Json split_to_json(const SplitBases& s) {
    Json out;
    out["old_basis"] = rational_mat_to_json(s.old_basis);
    out["new_basis"] = rational_mat_to_json(s.new_basis);
    out["kernel_dim"] = s.kernel_dim;
    out["truncated_at"] = s.truncated_at;
    out["mode"] = s.exact ? "exact" : "float";
    return out;
}

Json certificate_to_json(const Certificate& c) {
    Json out;
    out["hypothesis"] = Json{{"which", c.hypothesis.which},
                             {"p", c.hypothesis.p},
                             {"j", c.hypothesis.j},
                             {"count", c.hypothesis.count}};
    out["size"] = c.form.size().get_str();
    Json subs = Json::array();
    for (const auto& h : c.subgroups) {
        Json gens = Json::array();
        for (const auto& g : h.generators) gens.push_back(g.x);
        subs.push_back(Json{{"order", h.order()}, {"generators", gens}});
    }
    out["subgroups"] = subs;
    Json entries = Json::array();
    for (const auto& e : c.entries) {
        Json je;
        je["gamma"] = e.gamma;
        je["subgroups"] = e.subgroup_ids;
        Json zeta = Json::array();
        for (const auto& z : e.zeta.entries)
            zeta.push_back(Json{{"subgroup", e.subgroup_ids[z.seq_pos]},
                                {"class_rep", z.class_rep.x},
                                {"value", rational_to_string(z.value)}});
        je["zeta"] = zeta;
        je["verified"] = e.verified;
        entries.push_back(je);
    }
    out["entries"] = entries;
    return out;
}

Json hypothesis_to_json(const HypothesisCheck& h, const SizeGateCheck& gate) {
    Json out;
    out["satisfied"] = h.satisfied;
    out["hypothesis"] = h.satisfied ? h.which : "none";
    if (h.satisfied) {
        out["p"] = h.p;
        out["j"] = h.j;
        out["count"] = h.count;
    }
    if (!h.detail.empty()) out["detail"] = h.detail;
    Json jc;
    jc["level"] = gate.level;
    jc["size"] = gate.size.get_str();
    jc["bound_level_pow_9"] = gate.bound.get_str();
    jc["size_bound_met"] = gate.size_bound_met;
    jc["applies"] = gate.applies;
    if (gate.applies) {
        jc["p"] = gate.p;
        jc["j"] = gate.j;
        jc["multiplicity"] = gate.multiplicity;
    }
    out["size_gate"] = jc;
    return out;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

} // namespace fqm
