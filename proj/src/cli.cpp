#include "efxo/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "efxo/fairness.hpp"
#include "efxo/generator.hpp"
#include "efxo/json_io.hpp"
#include "efxo/oracle.hpp"
#include "efxo/reduction.hpp"
#include "efxo/solver.hpp"
#include "efxo/structure.hpp"

namespace efxo::cli {

namespace {

class BadInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Io {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

std::string read_text(const std::string& path, std::istream& in) {
    std::ostringstream buf;
    if (path == "-") {
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream file(path);
    if (!file) throw BadInput("cannot read '" + path + "'");
    buf << file.rdbuf();
    return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream file(path);
    if (!file) throw BadInput("cannot write '" + path + "'");
    file << text;
}

Instance load_instance(const std::string& path, std::istream& in) {
    return instance_from_json(parse_json_text(read_text(path, in)));
}

Rational rational_arg(const std::string& text, const char* name) {
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument& e) {
        throw BadInput(std::string(name) + ": " + e.what());
    }
}

void emit(const Io& io, const std::string& path, const Json& doc) {
    if (path.empty()) {
        io.out << dump_canonical(doc);
    } else {
        write_text(path, dump_canonical(doc));
    }
}

std::string dot(const Instance& inst) {
    std::ostringstream out;
    out << "graph instance {\n";
    for (VertexId x = 0; x < inst.n(); ++x) out << "  " << x << ";\n";
    for (const auto& e : inst.edges()) {
        out << "  " << e.u << " -- " << e.v << " [label=\"e" << e.id << "\", style="
            << (e.is_heavy() ? "bold" : "dashed") << "];\n";
    }
    out << "}\n";
    return out.str();
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string file;
    bool dot = false;
};

int analyze(const AnalyzeArgs& a, const Io& io) {
    auto inst = load_instance(a.file, io.in);
    if (a.dot) {
        io.out << dot(inst);
    } else {
        io.out << dump_canonical(classification_to_json(inst, classify_all(inst)));
    }
    return kOk;
}

struct SolveArgs {
    std::string file;
    std::string output;
    bool oracle_fallback = false;
    std::uint64_t budget = OracleOptions{}.budget;
};

int solve_cmd(const SolveArgs& a, const Io& io) {
    auto inst = load_instance(a.file, io.in);
    auto outcome = solve(inst);
    if (const auto* ok = std::get_if<Oriented>(&outcome)) {
        emit(io, a.output, orientation_to_json(ok->orientation));
        return kOk;
    }
    const auto& refused = std::get<Refused>(outcome);
    if (a.oracle_fallback) {
        io.err << "forbidden structure; falling back to exhaustive search\n";
        OracleOptions opts;
        opts.budget = a.budget;
        if (auto found = exists_efx_orientation(inst, {}, opts)) {
            emit(io, a.output, orientation_to_json(*found));
            return kOk;
        }
        Json doc;
        doc["status"] = "refused";
        doc["reason"] = "NoEfxOrientation";
        io.out << dump_canonical(doc);
        return kNegative;
    }
    Json doc;
    doc["status"] = "refused";
    doc["reason"] = "ForbiddenStructure";
    doc["component"] = refused.reason.component;
    io.out << dump_canonical(doc);
    io.err << "instance contains a heavy component inducing a non-trivial odd multitree\n";
    return kNegative;
}

struct CheckArgs {
    std::string instance;
    std::string orientation;
};

int check(const CheckArgs& a, const Io& io) {
    auto inst = load_instance(a.instance, io.in);
    auto pi = orientation_from_json(inst, parse_json_text(read_text(a.orientation, io.in)));
    if (pi.size() != inst.m()) throw BadInput("orientation length does not match the edge count");
    auto report = envy_report(inst, pi);
    Json doc;
    doc["complete"] = pi.is_complete();
    Json body = envy_report_to_json(report);
    for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = *it;
    io.out << dump_canonical(doc);
    return pi.is_complete() && report.is_efx() ? kOk : kNegative;
}

struct OracleArgs {
    std::string file;
    bool all = false;
    bool count = false;
    std::vector<std::string> fixes;
    std::uint64_t budget = OracleOptions{}.budget;
    unsigned threads = 0;
};

std::vector<Constraint> parse_fixes(const std::vector<std::string>& fixes) {
    std::vector<Constraint> out;
    for (const auto& f : fixes) {
        auto eq = f.find('=');
        try {
            if (eq == std::string::npos) throw std::invalid_argument("missing '='");
            std::size_t used = 0;
            unsigned long long e = std::stoull(f.substr(0, eq), &used);
            if (used != eq) throw std::invalid_argument("bad edge");
            std::string rhs = f.substr(eq + 1);
            unsigned long long v = std::stoull(rhs, &used);
            if (used != rhs.size()) throw std::invalid_argument("bad vertex");
            out.push_back({static_cast<EdgeId>(e), static_cast<VertexId>(v)});
        } catch (const std::exception&) {
            throw BadInput("--fix expects <edge>=<vertex>, got '" + f + "'");
        }
    }
    return out;
}

int oracle_cmd(const OracleArgs& a, const Io& io) {
    auto inst = load_instance(a.file, io.in);
    auto constraints = parse_fixes(a.fixes);
    OracleOptions opts;
    opts.budget = a.budget;
    opts.threads = a.threads;
    try {
        SplitSpace check(inst, constraints);
    } catch (const std::invalid_argument& e) {
        throw BadInput(e.what());
    }
    Json doc;
    bool found = false;
    if (a.all) {
        auto list = all_efx_orientations(inst, constraints, opts);
        found = !list.empty();
        doc["count"] = list.size();
        Json items = Json::array();
        for (const auto& pi : list) items.push_back(orientation_to_json(pi)["owners"]);
        doc["orientations"] = std::move(items);
    } else if (a.count) {
        auto n = count_efx_orientations(inst, constraints, opts);
        found = n > 0;
        doc["count"] = n;
    } else {
        auto pi = exists_efx_orientation(inst, constraints, opts);
        found = pi.has_value();
        doc["exists"] = found;
        doc["orientation"] = pi ? orientation_to_json(*pi) : Json(nullptr);
    }
    doc["representatives"] = representative_count(inst, constraints);
    io.out << dump_canonical(doc);
    return found ? kOk : kNegative;
}

struct ReduceArgs {
    std::string file;
    std::size_t q = 2;
    std::string alpha;
    std::string beta = "1";
    std::string output;
    std::string map_out;
    bool verify = false;
};

int reduce(const ReduceArgs& a, const Io& io) {
    Circuit c;
    try {
        c = parse_circuit(read_text(a.file, io.in));
    } catch (const CircuitError& e) {
        throw BadInput(e.what());
    }
    Rational beta = rational_arg(a.beta, "--beta");
    Rational alpha = a.alpha.empty() ? Rational(static_cast<std::int64_t>(a.q)) * beta + 1
                                     : rational_arg(a.alpha, "--alpha");
    Reduction r = [&] {
        try {
            return build_instance(c, a.q, alpha, beta);
        } catch (const std::invalid_argument& e) {
            throw BadInput(e.what());
        }
    }();
    if (a.q > 2) {
        io.err << "warning: at q > 2 a NOT gadget has no EFX completion when its input is false\n";
    }
    Json inst = instance_to_json(r.instance);
    Json map = reduction_map_to_json(r.map);
    if (!a.output.empty()) write_text(a.output, dump_canonical(inst));
    if (!a.map_out.empty()) write_text(a.map_out, dump_canonical(map));
    if (a.verify) {
        auto report = verify_reduction_properties(r.instance, r.map);
        io.out << dump_canonical(reduction_report_to_json(report));
        return report.all() ? kOk : kNegative;
    }
    if (a.output.empty()) {
        Json doc;
        doc["instance"] = std::move(inst);
        doc["map"] = std::move(map);
        io.out << dump_canonical(doc);
    }
    return kOk;
}

struct GenArgs {
    GenParams params;
    std::string alpha = "3";
    std::string beta = "1";
    std::uint64_t seed = 0;
    std::string output;
};

int gen(GenArgs a, const Io& io) {
    a.params.alpha = rational_arg(a.alpha, "--alpha");
    a.params.beta = rational_arg(a.beta, "--beta");
    Instance inst = [&] {
        try {
            return gen_random_instance(a.params, a.seed);
        } catch (const std::invalid_argument& e) {
            throw BadInput(e.what());
        }
    }();
    emit(io, a.output, instance_to_json(inst));
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    Io io{in, out, err};
    CLI::App app{"EFX orientations of bi-valued symmetric multigraphs", "efxo"};
    app.require_subcommand(1, 1);

    AnalyzeArgs analyze_args;
    auto* analyze_cmd = app.add_subcommand("analyze", "Classify heavy components");
    analyze_cmd->add_option("instance", analyze_args.file, "Instance JSON ('-' for stdin)")->required();
    analyze_cmd->add_flag("--dot", analyze_args.dot, "Print the instance in DOT format");

    SolveArgs solve_args;
    auto* solve_sub = app.add_subcommand("solve", "Construct an EFX orientation");
    solve_sub->add_option("instance", solve_args.file, "Instance JSON ('-' for stdin)")->required();
    solve_sub->add_option("-o,--output", solve_args.output, "Write the orientation here");
    solve_sub->add_flag("--oracle-fallback", solve_args.oracle_fallback,
                        "Search exhaustively when the instance has a forbidden structure");
    solve_sub->add_option("--budget", solve_args.budget, "Oracle representative budget");

    CheckArgs check_args;
    auto* check_sub = app.add_subcommand("check", "Report envy of an orientation");
    check_sub->add_option("instance", check_args.instance, "Instance JSON")->required();
    check_sub->add_option("orientation", check_args.orientation, "Orientation JSON")->required();

    OracleArgs oracle_args;
    auto* oracle_sub = app.add_subcommand("oracle", "Exhaustive EFX search");
    oracle_sub->add_option("instance", oracle_args.file, "Instance JSON ('-' for stdin)")->required();
    auto* all_flag = oracle_sub->add_flag("--all", oracle_args.all, "List every EFX representative");
    auto* count_flag = oracle_sub->add_flag("--count", oracle_args.count, "Count EFX representatives");
    auto* exists_flag = oracle_sub->add_flag("--exists", "Report one EFX orientation (default)");
    all_flag->excludes(count_flag)->excludes(exists_flag);
    count_flag->excludes(exists_flag);
    oracle_sub->add_option("--fix", oracle_args.fixes, "Constrain an edge: <edge>=<vertex>");
    oracle_sub->add_option("--budget", oracle_args.budget, "Maximum number of representatives");
    oracle_sub->add_option("--threads", oracle_args.threads, "Worker threads (0 = hardware)");

    ReduceArgs reduce_args;
    auto* reduce_sub = app.add_subcommand("reduce", "Compile a NOT/OR circuit into an instance");
    reduce_sub->add_option("circuit", reduce_args.file, "Circuit file ('-' for stdin)")->required();
    reduce_sub->add_option("-q,--multiplicity", reduce_args.q, "Multiplicity q >= 2")->required();
    reduce_sub->add_option("--alpha", reduce_args.alpha, "Heavy weight (default q*beta + 1)");
    reduce_sub->add_option("--beta", reduce_args.beta, "Light weight");
    reduce_sub->add_option("-o,--output", reduce_args.output, "Write the instance here");
    reduce_sub->add_option("--map-out", reduce_args.map_out, "Write the reduction map here");
    reduce_sub->add_flag("--verify", reduce_args.verify, "Check the structural properties");

    GenArgs gen_args;
    auto& gp = gen_args.params;
    auto* gen_sub = app.add_subcommand("gen", "Generate a random connected instance");
    gen_sub->add_option("--vertices", gp.vertices, "Number of vertices")->required();
    gen_sub->add_option("--edges", gp.edges, "Target edge count (default 2n)");
    gen_sub->add_option("--multiplicity", gp.multiplicity, "Maximum parallel class size")->required();
    gen_sub->add_option("--heavy-density", gp.heavy_density, "Probability an edge is heavy")->required();
    gen_sub->add_option("--loop-probability", gp.loop_probability, "Probability an extra edge is a loop");
    gen_sub->add_option("--alpha", gen_args.alpha, "Heavy weight");
    gen_sub->add_option("--beta", gen_args.beta, "Light weight");
    gen_sub->add_option("--seed", gen_args.seed, "RNG seed")->required();
    auto* avoid = gen_sub->add_flag("--avoid-forbidden", gp.avoid_forbidden,
                                    "Resample until no forbidden structure remains");
    auto* repair = gen_sub->add_flag("--repair-forbidden", gp.repair_forbidden,
                                     "Patch forbidden components instead of resampling");
    avoid->excludes(repair);
    gen_sub->add_option("--max-attempts", gp.max_attempts, "Resampling budget");
    gen_sub->add_option("-o,--output", gen_args.output, "Write the instance here");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    }

    try {
        if (analyze_cmd->parsed()) return analyze(analyze_args, io);
        if (solve_sub->parsed()) return solve_cmd(solve_args, io);
        if (check_sub->parsed()) return check(check_args, io);
        if (oracle_sub->parsed()) return oracle_cmd(oracle_args, io);
        if (reduce_sub->parsed()) return reduce(reduce_args, io);
        if (gen_sub->parsed()) return gen(gen_args, io);
    } catch (const BadInput& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kBudget;
    } catch (const GenerationError& e) {
        err << "error: " << e.what() << "\n";
        return kBudget;
    }
    return kBadInput;
}

}  // namespace efxo::cli
