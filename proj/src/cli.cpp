#include "fqm/cli.hpp"

#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"

#include "fqm/json_io.hpp"

namespace fqm {

namespace {

struct CommonOpts {
    std::string jordan;
    std::string lattice_file;
    std::string subgroups = "all";
    bool include_trivial = false;
    std::string table_file;
    std::string lambda_csv;
    int samples = 5;
    unsigned seed = 1;
    int threads = 0;
    std::string out_file;
    long limit = 100000;
};

FiniteQuadraticModule load_form(const CommonOpts& o) {
    if (!o.jordan.empty() && !o.lattice_file.empty())
        throw ValidationError("pass exactly one of --jordan and --lattice");
    if (!o.jordan.empty()) return from_jordan(o.jordan);
    if (!o.lattice_file.empty())
        return from_even_lattice(parse_lattice_json(load_json_file(o.lattice_file)));
    throw ValidationError("a form is required: --jordan <symbol> or --lattice <file>");
}

std::vector<Subgroup> load_subgroups(const FiniteQuadraticModule& d, const CommonOpts& o) {
    IsotropicOptions opts;
    opts.include_trivial = o.include_trivial;
    opts.size_bound = o.limit;
    if (o.subgroups == "all") return isotropic_subgroups(d, opts);
    if (o.subgroups.rfind("max-order=", 0) == 0) {
        opts.max_order = std::stol(o.subgroups.substr(10));
        return isotropic_subgroups(d, opts);
    }
    // otherwise a JSON file: [{"generators": [[...], ...]}, ...]
    Json j = load_json_file(o.subgroups);
    if (!j.is_array()) throw ValidationError("subgroup file must be a JSON array");
    std::vector<Subgroup> out;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("generators"))
            throw ValidationError("each subgroup entry needs 'generators'");
        std::vector<Element> gens;
        for (const auto& g : e["generators"]) {
            std::vector<long> coords;
            for (const auto& c : g) coords.push_back((long)c.get<long long>());
            gens.push_back(d.reduced(std::move(coords)));
        }
        Subgroup s = subgroup_closure(d, gens, o.limit);
        if (!is_isotropic(d, s))
            throw ValidationError("subgroup file contains a non-isotropic subgroup");
        out.push_back(std::move(s));
    }
    if (out.empty() && !o.include_trivial)
        throw ValidationError("subgroup file is empty");
    return out;
}

QVec parse_lambda(const std::string& csv, long expected) {
    QVec out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') { out.push_back(rational_from_string(cur)); cur.clear(); }
        else if (!std::isspace((unsigned char)c)) cur.push_back(c);
    }
    if (!cur.empty()) out.push_back(rational_from_string(cur));
    if ((long)out.size() != expected)
        throw ValidationError("--lambda needs " + std::to_string(expected) +
                              " comma-separated rationals");
    return out;
}

void emit(const Json& j, const CommonOpts& o, std::ostream& out) {
    if (o.out_file.empty()) {
        out << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(o.out_file);
    if (!f) throw std::ios_base::failure("cannot open output file: " + o.out_file);
    f << j.dump(2) << "\n";
}

Json subgroups_to_json(const std::vector<Subgroup>& subs) {
    Json arr = Json::array();
    for (const auto& s : subs) {
        Json gens = Json::array();
        for (const auto& g : s.generators) gens.push_back(g.x);
        arr.push_back(Json{{"order", s.order()}, {"generators", gens}});
    }
    return arr;
}

int dispatch(const std::string& cmd, const CommonOpts& o, std::ostream& out,
             std::ostream& err) {
    if (cmd == "fqm-info") {
        FiniteQuadraticModule d = load_form(o);
        d.size_long(o.limit);
        Json j;
        if (d.size().fits_slong_p()) j["order"] = d.size().get_si();
        else j["order"] = d.size().get_str();
        j["rank"] = d.rank();
        j["orders"] = d.orders();
        j["level"] = d.level();
        int s = signature(d);
        j["signature"] = s;
        j["even_signature"] = s % 2 == 0;
        emit(j, o, out);
        err << "|D| = " << d.size().get_str() << ", level " << d.level()
            << ", signature " << s << "\n";
        return 0;
    }
    if (cmd == "isotropic") {
        FiniteQuadraticModule d = load_form(o);
        IsotropicOptions opts;
        opts.include_trivial = o.include_trivial;
        opts.size_bound = o.limit;
        if (o.subgroups.rfind("max-order=", 0) == 0)
            opts.max_order = std::stol(o.subgroups.substr(10));
        auto subs = isotropic_subgroups(d, opts);
        Json j;
        j["count"] = subs.size();
        j["subgroups"] = subgroups_to_json(subs);
        emit(j, o, out);
        err << subs.size() << " isotropic subgroup(s)\n";
        return 0;
    }
    if (cmd == "weil-verify") {
        FiniteQuadraticModule d = load_form(o);
        d.size_long(o.limit);
        Report rep = verify_relations(d);
        Report gam = verify_gamma_trivial(d, o.samples, o.seed);
        rep.insert(rep.end(), gam.begin(), gam.end());
        Json j = report_to_json(rep);
        j["seed"] = o.seed;
        j["samples"] = o.samples;
        emit(j, o, out);
        err << (report_all_pass(rep) ? "all checks pass" : "CHECKS FAILED") << "\n";
        return report_all_pass(rep) ? 0 : 5;
    }
    if (cmd == "lifts-check") {
        FiniteQuadraticModule d = load_form(o);
        d.size_long(o.limit);
        auto subs = load_subgroups(d, o);
        LiftSystem sys = build_lift_system(d, subs, o.include_trivial);
        QMat ker = kernel_down(sys);
        Json j;
        j["subgroup_count"] = subs.size();
        j["rows"] = sys.total_rows;
        j["columns"] = d.element_count(o.limit);
        j["kernel_dim"] = ker.size();
        j["up_surjective"] = is_up_surjective(sys);
        bool even = signature(d) % 2 == 0;
        Json homs = Json::array();
        if (even) {
            for (size_t i = 0; i < subs.size(); ++i) {
                Json h;
                h["subgroup"] = i;
                h["report"] = report_to_json(check_homomorphism(d, subs[i]));
                homs.push_back(h);
            }
        }
        j["homomorphism_checks"] = homs;
        if (!even) j["note"] = "odd signature: Weil intertwining checks skipped";
        emit(j, o, out);
        err << "rows " << sys.total_rows << ", kernel dim " << ker.size() << "\n";
        return 0;
    }
    if (cmd == "oldnew-split" || cmd == "detect") {
        if (o.table_file.empty()) throw ValidationError("--table <file> is required");
        ParsedTable pt = parse_coeff_table_json(load_json_file(o.table_file));
        pt.form.size_long(o.limit);
        auto subs = load_subgroups(pt.form, o);
        if (cmd == "detect") {
            if (o.lambda_csv.empty())
                throw ValidationError("--lambda <q1,q2,...> is required for detect");
            Json j;
            if (pt.table.exact) {
                QVec lambda = parse_lambda(o.lambda_csv, pt.table.form_count());
                j["is_oldform"] = is_oldform(pt.form, pt.table, lambda, subs);
            } else {
                QVec lambda = parse_lambda(o.lambda_csv, pt.table.form_count());
                std::vector<double> lf(lambda.size());
                for (size_t i = 0; i < lambda.size(); ++i) lf[i] = lambda[i].get_d();
                j["is_oldform"] = is_oldform_float(pt.form, pt.table, lf, subs);
            }
            j["truncated_at"] = pt.table.sturm;
            j["mode"] = pt.table.exact ? "exact" : "float";
            emit(j, o, out);
            err << (j["is_oldform"].get<bool>() ? "oldform (up to the Sturm bound)"
                                                : "not an oldform") << "\n";
            return 0;
        }
        Json j;
        if (pt.table.exact) {
            SplitBases s = split_old_new(pt.form, pt.table, subs);
            j = split_to_json(s);
        } else {
            LiftSystem sys = build_lift_system(pt.form, subs);
            j["old_basis"] = double_mat_to_json(oldspace_basis_float(pt.form, pt.table, subs));
            j["new_basis"] = double_mat_to_json(newspace_basis_float(pt.form, pt.table, subs));
            j["kernel_dim"] = kernel_down(sys).size();
            j["truncated_at"] = pt.table.sturm;
            j["mode"] = "float";
        }
        emit(j, o, out);
        err << "old dim " << j["old_basis"].size() << ", new dim " << j["new_basis"].size()
            << " (up to Sturm bound " << pt.table.sturm << ")\n";
        return 0;
    }
    if (cmd == "certify") {
        if (o.jordan.empty())
            throw ValidationError("certify consumes a Jordan symbol: --jordan <symbol>");
        JordanSymbol sym = parse_jordan(o.jordan);
        int threads = o.threads > 0 ? o.threads
                                    : (int)std::max(1u, std::thread::hardware_concurrency());
        Certificate cert = surjectivity_certificate(sym, threads, o.limit);
        Json j = certificate_to_json(cert);
        emit(j, o, out);
        err << "certified " << cert.entries.size() << " elements with "
            << cert.subgroups.size() << " distinct subgroups\n";
        return 0;
    }
    if (cmd == "theorem-check") {
        Json j;
        bool satisfied;
        if (!o.jordan.empty()) {
            JordanSymbol sym = parse_jordan(o.jordan);
            HypothesisCheck h = check_theorem_hypotheses(sym);
            j = hypothesis_to_json(h, check_size_gate(sym));
            satisfied = h.satisfied;
        } else {
            FiniteQuadraticModule d = load_form(o);
            HypothesisCheck h = check_theorem_hypotheses_group(d);
            j = hypothesis_to_json(h, check_size_gate_group(d));
            satisfied = h.satisfied;
        }
        emit(j, o, out);
        err << (satisfied ? "hypothesis " + j["hypothesis"].get<std::string>() + " fired"
                          : "no hypothesis satisfied") << "\n";
        return satisfied ? 0 : 5;
    }
    throw ValidationError("unknown subcommand: " + cmd);
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact toolkit for discriminant forms, Weil representations and "
                 "the oldform/newform machinery"};
    app.require_subcommand(1);

    CommonOpts o;
    std::vector<CLI::App*> subs;
    for (const char* name : {"fqm-info", "isotropic", "weil-verify", "lifts-check",
                             "oldnew-split", "detect", "certify", "theorem-check"}) {
        CLI::App* s = app.add_subcommand(name);
        s->add_option("--jordan", o.jordan, "Jordan symbol, e.g. \"2^1:A+3^1:a=2\"");
        s->add_option("--lattice", o.lattice_file, "even lattice JSON file {\"gram\": [[...]]}");
        s->add_option("--subgroups", o.subgroups, "all | max-order=k | <file.json>");
        s->add_flag("--include-trivial", o.include_trivial, "allow the trivial subgroup");
        s->add_option("--table", o.table_file, "coefficient table JSON file");
        s->add_option("--lambda", o.lambda_csv, "comma-separated rational coefficients");
        s->add_option("--samples", o.samples, "number of random Gamma(N) samples");
        s->add_option("--seed", o.seed, "random seed");
        s->add_option("--threads", o.threads, "worker threads for certify (0 = auto)");
        s->add_option("--out", o.out_file, "write JSON here instead of stdout");
        s->add_option("--limit", o.limit, "size guard for exhaustive work (default 100000)");
        subs.push_back(s);
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::stringstream dummy;
        int code = app.exit(e, dummy, err);
        return code == 0 ? 0 : 2;
    }

    try {
        for (size_t i = 0; i < subs.size(); ++i)
            if (subs[i]->parsed()) return dispatch(subs[i]->get_name(), o, out, err);
        throw ValidationError("no subcommand given");
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::ios_base::failure& e) {
        err << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const SizeLimitError& e) {
        err << "size limit: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return 5;
    }
}

} // namespace fqm
