#include "sdiff/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sdiff/decompose.hpp"
#include "sdiff/exact.hpp"
#include "sdiff/generators.hpp"
#include "sdiff/heuristics.hpp"
#include "sdiff/io.hpp"
#include "sdiff/simulate.hpp"
#include "sdiff/treewidth.hpp"

namespace sdiff {

namespace {

using nlohmann::json;

std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

std::size_t dp_node_cap(bool force, std::ostream& err) {
    std::size_t cap = DpOptions{}.max_nodes;
    if (const char* env = std::getenv("SD_MAX_DP_NODES"); env != nullptr && *env != '\0') {
        std::size_t value = 0;
        auto [end, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), value);
        if (ec != std::errc{} || *end != '\0') throw ValidationError("SD_MAX_DP_NODES must be a nonnegative integer");
        cap = value;
    }
    if (force) {
        err << "warning: --force lifts the dp node cap to " << kDpHardNodeLimit << "; memory use grows as 2^n\n";
        cap = kDpHardNodeLimit;
    }
    return std::min(cap, kDpHardNodeLimit);
}

// "1,2;2,3" with 1-based elements.
std::vector<std::vector<std::size_t>> parse_sets(const std::string& text, std::size_t universe) {
    std::vector<std::vector<std::size_t>> sets;
    std::stringstream groups(text);
    std::string group;
    while (std::getline(groups, group, ';')) {
        std::vector<std::size_t> set;
        std::stringstream items(group);
        std::string item;
        while (std::getline(items, item, ',')) {
            item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                       item.end());
            if (item.empty()) continue;
            std::size_t value = 0;
            auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
            if (ec != std::errc{} || end != item.data() + item.size() || value < 1 || value > universe) {
                throw ValidationError("set element '" + item + "' is not in 1.." + std::to_string(universe));
            }
            set.push_back(value - 1);
        }
        sets.push_back(std::move(set));
    }
    return sets;
}

std::vector<NodeId> parse_sequence(const std::string& text) {
    std::vector<NodeId> seq;
    std::stringstream items(text);
    std::string item;
    while (std::getline(items, item, ',')) {
        NodeId value = 0;
        auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (ec != std::errc{} || end != item.data() + item.size()) {
            throw ValidationError("sequence entry '" + item + "' is not a node id");
        }
        seq.push_back(value);
    }
    return seq;
}

std::filesystem::path meta_path(const std::filesystem::path& out) {
    std::filesystem::path p = out;
    p.replace_extension(".meta.json");
    return p;
}

struct SolveFlags {
    std::string instance_path;
    std::string solver = "dp";
    std::string td_path;
    std::optional<std::size_t> z;
    std::optional<double> alpha;
    std::optional<double> beta;
    bool force = false;
    std::optional<std::uint64_t> rng_seed;
};

DiffusionInstance load_with_overrides(const SolveFlags& f) {
    DiffusionInstance instance = load_instance(f.instance_path);
    if (f.z) instance.z = *f.z;
    if (f.alpha) instance.alpha = *f.alpha;
    if (f.beta) instance.beta = *f.beta;
    instance.require_valid();
    return instance;
}

SolveResult run_solver(const DiffusionInstance& instance, const SolveFlags& f, std::ostream& err) {
    const TieBreak tie = f.rng_seed ? TieBreak::random(*f.rng_seed) : TieBreak::smallest_id();
    if (f.solver == "brute") {
        if (f.force) err << "warning: --force lifts the brute-force node cap; runtime grows as n!\n";
        return brute_force_optimal(instance, {BruteForceOptions{}.max_nodes, f.force});
    }
    if (f.solver == "dp") return dp_optimal(instance, {dp_node_cap(f.force, err)});
    if (f.solver == "greedy") return greedy_sequence(instance, tie);
    if (f.solver == "majority") return majority_sequence(instance, tie);
    if (f.solver == "tw-full" || f.solver == "tw-partial") {
        const TreeDecomposition td =
            f.td_path.empty() ? min_fill_decomposition(instance.network) : load_decomposition(f.td_path);
        TreewidthOptions options;
        if (f.force) {
            err << "warning: --force raises the closed-bag cap to " << kMaxClosedBagLimit
                << "; enumeration grows factorially\n";
            options.max_closed_bag = kMaxClosedBagLimit;
        }
        return f.solver == "tw-full" ? tw_full_optimal(instance, td, options)
                                     : tw_partial_optimal(instance, td, options);
    }
    if (f.solver == "decompose-dp") {
        const std::size_t cap = dp_node_cap(f.force, err);
        return solve_full_via_decomposition(
            instance, [cap](const DiffusionInstance& part) { return dp_optimal(part, {cap}); });
    }
    throw ValidationError("unknown solver '" + f.solver + "'");
}

int cmd_solve(const SolveFlags& f, std::ostream& out, std::ostream& err) {
    const DiffusionInstance instance = load_with_overrides(f);
    const auto start = std::chrono::steady_clock::now();
    const SolveResult result = run_solver(instance, f, err);
    const auto stop = std::chrono::steady_clock::now();
    json j = result_to_json(result);
    j["solver"] = f.solver;
    j["wall_ms"] = std::chrono::duration<double, std::milli>(stop - start).count();
    out << j.dump() << "\n";
    return result.feasible() ? kExitOk : kExitInfeasible;
}

struct GenerateFlags {
    std::string family;
    int k = 2;
    std::size_t universe = 0;
    std::string sets;
    double lambda = 1.0;
    bool binary = false;
    std::size_t n = 8;
    double p = 0.3;
    std::uint64_t rng_seed = 0;
    double w_min = 1.0;
    double w_max = 1.0;
    bool integral = false;
    std::optional<std::size_t> z;
    std::string out;
};

json layout_json(const GadgetLayout& l) {
    return {{"set_count", l.set_count}, {"universe", l.universe}, {"copies", l.copies},
            {"first_set_node", l.set_node(0)}, {"first_q_node", l.q_node(0)},
            {"first_q_prime_node", l.q_prime_node(0)}, {"first_element_node", l.element_node(0)}};
}

int cmd_generate(const GenerateFlags& f, std::ostream& out) {
    DiffusionInstance instance;
    json meta = {{"family", f.family}};
    if (f.family == "gk") {
        instance = make_gk(f.k);
        meta["k"] = f.k;
        meta["strategy_a_time"] = 3.0 * f.k * f.k - 2.0 * f.k;
    } else if (f.family == "np-hard" || f.family == "inapprox") {
        SetCoverInstance sc;
        sc.universe = f.universe;
        sc.sets = parse_sets(f.sets, f.universe);
        meta["universe"] = f.universe;
        meta["sets"] = f.sets;
        if (f.family == "np-hard") {
            const auto h = make_np_hardness(sc, static_cast<std::size_t>(f.k), {f.binary});
            instance = h.instance;
            meta["k"] = f.k;
            meta["threshold"] = h.threshold;
            meta["binary_weights"] = f.binary;
            meta["layout"] = layout_json(h.layout);
        } else {
            const auto g = make_inapprox(sc, f.lambda);
            instance = g.instance;
            meta["lambda"] = f.lambda;
            meta["set_cost"] = g.set_cost;
            meta["layout"] = layout_json(g.layout);
        }
    } else if (f.family == "random") {
        instance.network = random_connected(f.n, f.p, {f.w_min, f.w_max, f.integral}, f.rng_seed);
        instance.z = f.z.value_or(f.n);
        meta["n"] = f.n;
        meta["p"] = f.p;
        meta["rng_seed"] = f.rng_seed;
        meta["weights"] = {{"min", f.w_min}, {"max", f.w_max}, {"integral", f.integral}};
    } else {
        throw ValidationError("unknown family '" + f.family + "'");
    }
    if (f.z && f.family != "random") instance.z = *f.z;
    const auto problems = instance.network.validate();
    if (!problems.empty()) throw ValidationError("generated network is invalid: " + problems.front());
    instance.require_valid();
    meta["nodes"] = instance.size();
    meta["edges"] = instance.network.edge_count();
    meta["z"] = instance.z;

    if (f.out.empty()) {
        out << json{{"instance", instance_to_json(instance)}, {"meta", meta}}.dump(2) << "\n";
        return kExitOk;
    }
    save_instance(instance, f.out);
    write_text_file(meta_path(f.out), meta.dump(2) + "\n");
    out << f.out << "\n";
    return kExitOk;
}

struct CompareFlags {
    int k_min = 2;
    int k_max = 8;
    bool dp = true;
    bool force = false;
};

int cmd_compare(const CompareFlags& f, std::ostream& out, std::ostream& err) {
    if (f.k_min < 1 || f.k_max < f.k_min) throw ValidationError("need 1 <= k-min <= k-max");
    const std::size_t cap = f.dp ? dp_node_cap(f.force, err) : 0;
    out << "k,n,strategy_a,greedy,majority,dp,greedy_ratio,majority_ratio,H_k,greedy_dp_ratio,majority_dp_ratio\n";
    for (int k = f.k_min; k <= f.k_max; ++k) {
        const DiffusionInstance gk = make_gk(k);
        const double a = strategy_a(gk).total_time;
        const double g = greedy_sequence(gk).total_time;
        const double m = majority_sequence(gk).total_time;
        std::optional<double> d;
        if (f.dp && gk.size() <= cap) d = dp_optimal(gk, {cap}).total_time;
        out << k << ',' << gk.size() << ',' << format_number(a) << ',' << format_number(g) << ','
            << format_number(m) << ',' << (d ? format_number(*d) : "") << ',' << format_number(g / a) << ','
            << format_number(m / a) << ',' << format_number(harmonic(k)) << ','
            << (d ? format_number(g / *d) : "") << ',' << (d ? format_number(m / *d) : "") << "\n";
    }
    return kExitOk;
}

struct SimulateFlags {
    SolveFlags solve;
    std::string sequence;
    std::size_t trials = 100000;
    std::uint64_t sim_seed = 0;
    std::size_t workers = 1;
};

int cmd_simulate(const SimulateFlags& f, std::ostream& out, std::ostream& err) {
    const DiffusionInstance instance = load_with_overrides(f.solve);
    std::vector<NodeId> seq;
    if (!f.sequence.empty()) {
        seq = parse_sequence(f.sequence);
    } else {
        SolveFlags s = f.solve;
        s.rng_seed.reset();
        const SolveResult r = run_solver(instance, s, err);
        if (!r.feasible()) {
            err << "error: the " << s.solver << " solver found no finite-time sequence\n";
            return kExitInfeasible;
        }
        seq = r.sequence;
    }
    const SimulationSummary s = simulate_sequence(instance, seq, {f.trials, f.sim_seed, f.workers});
    out << json{{"mean", s.mean},       {"std_error", s.std_error}, {"trials", s.trials},
                {"analytic", s.analytic}, {"min", s.min},             {"max", s.max},
                {"sequence", seq}}
               .dump()
        << "\n";
    return kExitOk;
}

int cmd_decompose(const SolveFlags& f, bool solve, std::ostream& out, std::ostream& err) {
    DiffusionInstance instance = load_instance(f.instance_path);
    instance.z = instance.size();
    const auto bcc = biconnected_components(instance.network);
    json blocks = json::array();
    for (const auto& part : component_instances(instance)) {
        json ext = json::array();
        for (double x : part.instance.network.external()) ext.push_back(x);
        blocks.push_back({{"entry", part.entry}, {"nodes", part.to_global}, {"external", ext}});
    }
    json j = {{"components", bcc.components}, {"cut_nodes", bcc.cut_nodes}, {"blocks", blocks}};
    int code = kExitOk;
    if (solve) {
        const std::size_t cap = dp_node_cap(f.force, err);
        const SolveResult r = solve_full_via_decomposition(
            instance, [cap](const DiffusionInstance& part) { return dp_optimal(part, {cap}); });
        j["result"] = result_to_json(r);
        if (!r.feasible()) code = kExitInfeasible;
    }
    out << j.dump() << "\n";
    return code;
}

int cmd_treedec(const std::string& path, const std::string& out_path, std::ostream& out) {
    const DiffusionInstance instance = load_instance(path);
    const TreeDecomposition td = min_fill_decomposition(instance.network);
    if (!out_path.empty()) {
        save_decomposition(td, instance.size(), out_path);
        out << json{{"width", td.width()}, {"bags", td.bags.size()}, {"out", out_path}}.dump() << "\n";
    } else {
        json j = decomposition_to_json(td);
        j["width"] = td.width();
        out << j.dump() << "\n";
    }
    return kExitOk;
}

int cmd_validate(const std::string& path, const std::string& td_path, std::ostream& out) {
    const json raw = read_json_file(path);
    const DiffusionInstance instance = instance_from_json(raw);
    std::vector<std::string> problems = instance.network.validate();
    for (auto& p : instance.validate()) problems.push_back(p);
    json j = {{"nodes", instance.size()}, {"edges", instance.network.edge_count()}};
    if (!td_path.empty()) {
        const auto report = validate_decomposition(instance.network, load_decomposition(td_path));
        for (const auto& p : report.violations) problems.push_back("decomposition: " + p);
        j["width"] = report.width;
    }
    j["valid"] = problems.empty();
    j["violations"] = problems;
    out << j.dump() << "\n";
    return problems.empty() ? kExitOk : kExitError;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Strategic diffusion solvers, generators and simulator", "sdiff"};
    app.require_subcommand(1);

    SolveFlags solve;
    auto add_common = [](CLI::App* cmd, SolveFlags& f) {
        cmd->add_option("instance", f.instance_path, "Instance JSON file")->required();
        cmd->add_option("--z", f.z, "Override the number of nodes to activate");
        cmd->add_option("--alpha", f.alpha, "Override alpha");
        cmd->add_option("--beta", f.beta, "Override beta");
        cmd->add_flag("--force", f.force, "Lift size guards");
    };
    const std::vector<std::string> solvers{"brute", "dp", "greedy", "majority", "tw-full", "tw-partial",
                                           "decompose-dp"};
    auto* c_solve = app.add_subcommand("solve", "Solve an instance and print the result as JSON");
    add_common(c_solve, solve);
    c_solve->add_option("--solver", solve.solver, "Solver")->check(CLI::IsMember(solvers));
    c_solve->add_option("--td", solve.td_path, "Tree decomposition (.json or PACE .td); default min-fill");
    c_solve->add_option("--rng-seed", solve.rng_seed, "Random tie-breaking seed for greedy/majority");

    GenerateFlags gen;
    auto* c_gen = app.add_subcommand("generate", "Generate an instance family");
    c_gen->add_option("family", gen.family, "gk | np-hard | inapprox | random")
        ->required()
        ->check(CLI::IsMember({"gk", "np-hard", "inapprox", "random"}));
    c_gen->add_option("--k", gen.k, "G(k) size or cover budget");
    c_gen->add_option("--universe", gen.universe, "Set-cover universe size");
    c_gen->add_option("--sets", gen.sets, "Sets as 1-based element lists, e.g. \"1,2;2,3\"");
    c_gen->add_option("--lambda", gen.lambda, "Inapproximability exponent");
    c_gen->add_flag("--binary", gen.binary, "Unit-weight paths in the hardness gadget");
    c_gen->add_option("--n", gen.n, "Random graph size");
    c_gen->add_option("--p", gen.p, "Random extra-edge probability");
    c_gen->add_option("--rng-seed,--seed", gen.rng_seed, "Random seed");
    c_gen->add_option("--w-min", gen.w_min, "Smallest random weight");
    c_gen->add_option("--w-max", gen.w_max, "Largest random weight");
    c_gen->add_flag("--integral", gen.integral, "Integer random weights");
    c_gen->add_option("--z", gen.z, "Nodes to activate (default n)");
    c_gen->add_option("--out", gen.out, "Output instance path; metadata goes next to it");

    CompareFlags cmp;
    bool no_dp = false;
    auto* c_cmp = app.add_subcommand("compare", "Heuristics versus strategy A on G(k), as CSV");
    c_cmp->add_option("--k-min", cmp.k_min, "First k");
    c_cmp->add_option("--k-max", cmp.k_max, "Last k");
    c_cmp->add_flag("--no-dp", no_dp, "Skip the exact column");
    c_cmp->add_flag("--force", cmp.force, "Lift the dp node cap");

    SimulateFlags sim;
    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo estimate of a sequence's activation time");
    add_common(c_sim, sim.solve);
    c_sim->add_option("--sequence", sim.sequence, "Comma-separated sequence; default the --solver result");
    c_sim->add_option("--solver", sim.solve.solver, "Solver producing the sequence")->check(CLI::IsMember(solvers));
    c_sim->add_option("--td", sim.solve.td_path, "Tree decomposition for tw solvers");
    c_sim->add_option("--trials", sim.trials, "Number of trials")->check(CLI::PositiveNumber);
    c_sim->add_option("--rng-seed", sim.sim_seed, "Random seed");
    c_sim->add_option("--workers", sim.workers, "Worker threads")->check(CLI::PositiveNumber);

    SolveFlags dec;
    bool dec_solve = false;
    auto* c_dec = app.add_subcommand("decompose", "Biconnected blocks and their stub offsets");
    c_dec->add_option("instance", dec.instance_path, "Instance JSON file")->required();
    c_dec->add_flag("--solve", dec_solve, "Also solve full diffusion block by block with dp");
    c_dec->add_flag("--force", dec.force, "Lift the dp node cap");

    std::string td_instance;
    std::string td_out;
    auto* c_td = app.add_subcommand("treedec", "Min-fill tree decomposition");
    c_td->add_option("instance", td_instance, "Instance JSON file")->required();
    c_td->add_option("--out", td_out, "Write .json or PACE .td instead of printing");

    std::string val_instance;
    std::string val_td;
    auto* c_val = app.add_subcommand("validate", "Check an instance and optionally a decomposition");
    c_val->add_option("instance", val_instance, "Instance JSON file")->required();
    c_val->add_option("--td", val_td, "Tree decomposition file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (c_solve->parsed()) return cmd_solve(solve, out, err);
        if (c_gen->parsed()) return cmd_generate(gen, out);
        if (c_cmp->parsed()) {
            cmp.dp = !no_dp;
            return cmd_compare(cmp, out, err);
        }
        if (c_sim->parsed()) return cmd_simulate(sim, out, err);
        if (c_dec->parsed()) return cmd_decompose(dec, dec_solve, out, err);
        if (c_td->parsed()) return cmd_treedec(td_instance, td_out, out);
        if (c_val->parsed()) return cmd_validate(val_instance, val_td, out);
    } catch (const GuardError& e) {
        err << "refused: " << e.what() << "\n";
        return kExitGuard;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace sdiff
