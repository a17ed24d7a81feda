// Command line front end: sample, detect, sweep, verify, trees, analyze.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cbm/analysis.hpp"
#include "cbm/experiments.hpp"
#include "cbm/graph.hpp"
#include "cbm/models.hpp"
#include "cbm/stats.hpp"
#include "cbm/trees.hpp"

using namespace cbm;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct Globals {
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "json";
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Flat key=value lines; '#' starts a comment. Keys are flag names without dashes.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) + ": expected key=value");
        kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return kv;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::string& path) { return json::parse(slurp(path)); }

Graph read_graph(const std::string& path) {
    std::string text = trim(slurp(path));
    if (text.empty() || text.front() != '{') return from_text(text);
    json j = json::parse(text);
    // a sample file holding a pair: take the first graph
    if (!j.contains("n") && j.contains("a")) return from_json(j["a"]);
    return from_json(j);
}

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(g.out);
    if (!os) throw std::runtime_error("cannot write " + g.out);
    os << text;
}

std::string edge_rows(const std::string& label, const Graph& g) {
    std::ostringstream os;
    for (const auto& [u, v] : g.edges()) os << label << ',' << u << ',' << v << "\n";
    return os.str();
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

json params_json(const ModelParams& p) {
    return {{"n", p.n}, {"lambda", p.lambda}, {"k", p.k}, {"eps", p.eps}, {"s", p.s}};
}

void add_model_options(CLI::App* sub, ModelParams& p, bool with_n = true) {
    if (with_n) sub->add_option("--n", p.n, "number of vertices")->capture_default_str();
    sub->add_option("--lambda", p.lambda, "average degree of the parent graph")->capture_default_str();
    sub->add_option("--k", p.k, "number of communities")->capture_default_str();
    sub->add_option("--eps", p.eps, "community signal strength")->capture_default_str();
    sub->add_option("--s", p.s, "edge subsampling probability")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"correlated block model detection toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Globals glob;
    std::string config_path;
    app.add_option("--seed", glob.seed, "master seed")->capture_default_str();
    app.add_option("--out", glob.out, "output file (default stdout)");
    app.add_option("--format", glob.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--config", config_path, "flat key=value file mirroring the flags");

    // sample
    ModelParams sp;
    std::string sample_model = "P";
    int sample_N = 5, sample_cap = kDefaultVertexCap;
    auto* sample = app.add_subcommand("sample", "draw a graph pair (P, Q) or a truncated graph (Pprime)");
    add_model_options(sample, sp);
    sample->add_option("--model", sample_model, "P, Q or Pprime")->check(CLI::IsMember({"P", "Q", "Pprime"}))->capture_default_str();
    sample->add_option("--N", sample_N, "cycle length bound for Pprime")->capture_default_str();
    sample->add_option("--vertex-cap", sample_cap, "bad subgraph search cap for Pprime")->capture_default_str();

    // detect
    ModelParams dp_model;
    std::string in_a, in_b, method_name = "exact";
    int det_aleph = 0, det_reps = 0;
    double det_C = 0.5;
    auto* detect = app.add_subcommand("detect", "tree statistic and threshold decision for a graph pair");
    add_model_options(detect, dp_model, false);
    detect->add_option("--input-a", in_a, "first graph (text or JSON); a sample file holding a and b also works")->required();
    detect->add_option("--input-b", in_b, "second graph");
    detect->add_option("--aleph", det_aleph, "tree size (0 = default for n)");
    detect->add_option("--method", method_name, "exact or cc")->check(CLI::IsMember({"exact", "cc"}))->capture_default_str();
    detect->add_option("--reps", det_reps, "color coding repetitions (0 = variance rule)");
    detect->add_option("--C", det_C, "threshold constant in (0,1)")->capture_default_str();

    // sweep
    SweepConfig cfg;
    cfg.base = ModelParams{3000, 1.2, 2, 0.3, 1.0};
    std::string grid = "0.3,0.5,0.6,0.65,0.7,0.75,0.8,0.9", sweep_method = "exact";
    bool progress = false;
    auto* sw = app.add_subcommand("sweep", "detection statistics over a grid of s");
    add_model_options(sw, cfg.base);
    sw->add_option("--s-grid", grid, "comma separated, strictly increasing")->capture_default_str();
    sw->add_option("--aleph", cfg.aleph)->capture_default_str();
    sw->add_option("--trials", cfg.trials)->capture_default_str();
    sw->add_option("--method", sweep_method)->check(CLI::IsMember({"exact", "cc"}))->capture_default_str();
    sw->add_option("--reps", cfg.reps)->capture_default_str();
    sw->add_option("--C", cfg.C)->capture_default_str();
    sw->add_flag("--progress", progress, "trial progress on stderr");

    // verify
    double mutate = 1.0;
    auto* verify = app.add_subcommand("verify", "run the oracle verification suite");
    verify->add_option("--cycle-intensity-scale", mutate, "scale the Poisson check constant (mutation test)");

    // trees
    int tree_aleph = 4;
    auto* trees = app.add_subcommand("trees", "list unlabeled trees with a given number of edges");
    trees->add_option("--aleph", tree_aleph)->capture_default_str();

    // analyze
    std::string an_input;
    DensityParams an_dp;
    int an_N = 5;
    auto* analyze = app.add_subcommand("analyze", "density functional and cycle profile of a graph");
    analyze->add_option("--input", an_input)->required();
    analyze->add_option("--N", an_N, "cycle length bound")->capture_default_str();
    analyze->add_option("--D", an_dp.D)->capture_default_str();
    analyze->add_option("--scale-n", an_dp.n, "n used inside the functional")->capture_default_str();
    analyze->add_option("--lambda-tilde", an_dp.lambda_tilde)->capture_default_str();
    analyze->add_option("--k", an_dp.k)->capture_default_str();

    // Config injection: --config keys become flags placed right after the
    // verb, so explicit flags later on the line win.
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    try {
        for (std::size_t i = 0; i < args.size(); ++i) {
            std::string path;
            if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
            else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
            if (path.empty()) continue;
            std::size_t verb = 0;
            while (verb < args.size() && !app.get_subcommand_no_throw(args[verb])) ++verb;
            if (verb == args.size()) break;
            auto* sub = app.get_subcommand_no_throw(args[verb]);
            std::vector<std::string> inject;
            for (const auto& [k, v] : read_config(path)) {
                std::string flag = "--" + k;
                auto* opt = sub->get_option_no_throw(flag);
                if (!opt) opt = app.get_option_no_throw(flag);
                if (!opt) continue;  // keys for other verbs
                if (opt->get_type_size() == 0) {
                    if (v == "true" || v == "1") inject.push_back(flag);
                } else {
                    inject.push_back(flag);
                    inject.push_back(v);
                }
            }
            args.insert(args.begin() + static_cast<long>(verb) + 1, inject.begin(), inject.end());
            break;
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*sample) {
            Rng rng(glob.seed);
            json j;
            j["model"] = sample_model;
            j["seed"] = glob.seed;
            j["params"] = params_json(sp);
            std::string rows;
            if (sample_model == "P") {
                auto cs = sample_correlated(sp, rng);
                j["a"] = to_json(cs.a);
                j["b"] = to_json(cs.b);
                j["sigma"] = cs.sigma;
                j["pi"] = cs.pi.image();
                rows = edge_rows("a", cs.a) + edge_rows("b", cs.b);
            } else if (sample_model == "Q") {
                auto [a, b] = sample_null(sp, rng);
                j["a"] = to_json(a);
                j["b"] = to_json(b);
                rows = edge_rows("a", a) + edge_rows("b", b);
            } else {
                auto t = sample_truncated(sp, sample_N, sample_cap, density_params_for(sp), rng);
                j["g"] = to_json(t.g);
                j["g_prime"] = to_json(t.g_prime);
                j["removed"] = t.removed;
                j["patterns"] = t.patterns;
                j["sigma"] = t.sigma;
                rows = edge_rows("g", t.g) + edge_rows("g_prime", t.g_prime);
            }
            emit(glob, glob.format == "json" ? j.dump() + "\n" : "graph,u,v\n" + rows);
            if (sample_model == "P" && !glob.out.empty()) {
                json side = {{"model", "P"}, {"seed", glob.seed}, {"params", j["params"]},
                             {"sigma", j["sigma"]}, {"pi", j["pi"]}};
                std::ofstream os(glob.out + ".latent.json");
                if (!os) throw std::runtime_error("cannot write " + glob.out + ".latent.json");
                os << side.dump() << "\n";
            }
            return kExitOk;
        }

        if (*detect) {
            Graph a, b;
            if (in_b.empty()) {
                json j = read_json_file(in_a);
                if (!j.contains("a") || !j.contains("b"))
                    throw CLI::ValidationError("--input-b", "required unless --input-a holds both graphs");
                a = from_json(j["a"]);
                b = from_json(j["b"]);
            } else {
                a = read_graph(in_a);
                b = read_graph(in_b);
            }
            ModelParams p = dp_model;
            p.n = a.universe();
            int aleph = det_aleph > 0 ? det_aleph : default_aleph(p.n);
            Rng rng(glob.seed);
            auto res = f_tree_stat(a, b, p, aleph, tree_method_from_string(method_name), det_reps, rng);
            double tau = threshold_value(p, aleph, det_C);
            json per = json::array();
            const auto& shapes = enumerate_trees(aleph);
            for (const auto& st : res.per_shape)
                per.push_back({{"shape", shapes[st.shape_id].code},
                               {"aut", shapes[st.shape_id].aut},
                               {"w_a", st.w_a},
                               {"w_b", st.w_b},
                               {"a_coeff", st.a_coeff}});
            json j = {{"f_value", res.value},
                      {"tau", tau},
                      {"decision", res.value >= tau ? "planted" : "null"},
                      {"aleph", aleph},
                      {"method", to_string(res.method)},
                      {"reps", res.reps},
                      {"per_shape", per}};
            emit(glob, j.dump(2) + "\n");
            return kExitOk;
        }

        if (*sw) {
            cfg.s_grid = parse_grid(grid);
            cfg.seed = glob.seed;
            cfg.method = tree_method_from_string(sweep_method);
            TrialHook hook;
            if (progress)
                hook = [&](int t, StreamTag tag) {
                    if ((t + 1) % 10 == 0) std::cerr << (tag == kTagPlanted ? "P " : "Q ") << t + 1 << "\n";
                };
            auto res = sweep(cfg, hook);
            if (glob.format == "csv") {
                std::ostringstream os;
                write_csv(os, res);
                emit(glob, os.str());
            } else {
                emit(glob, to_json(res).dump(2) + "\n");
            }
            return kExitOk;
        }

        if (*verify) {
            VerifyOptions opt;
            opt.cycle_intensity_scale = mutate;
            auto rep = run_verification_suite(glob.seed, opt);
            if (glob.format == "csv") {
                std::ostringstream os;
                os << "name,pass,observed,tolerance\n";
                for (const auto& c : rep.checks)
                    os << c.name << ',' << (c.pass ? 1 : 0) << ',' << c.observed << ',' << c.tolerance << "\n";
                emit(glob, os.str());
            } else {
                emit(glob, to_json(rep).dump(2) + "\n");
            }
            return rep.all_pass() ? kExitOk : kExitVerifyFailed;
        }

        if (*trees) {
            const auto& ts = enumerate_trees(tree_aleph);
            if (glob.format == "csv") {
                std::ostringstream os;
                os << "aleph,count,otter_estimate\n";
                for (int a = 1; a <= tree_aleph; ++a) {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "%.17g", otter_estimate(a));
                    os << a << ',' << enumerate_trees(a).size() << ',' << buf << "\n";
                }
                emit(glob, os.str());
            } else {
                json arr = json::array();
                for (const auto& t : ts) arr.push_back({{"code", t.code}, {"aut", t.aut}, {"edges", t.edges}});
                json j = {{"aleph", tree_aleph},
                          {"count", ts.size()},
                          {"otter_estimate", otter_estimate(tree_aleph)},
                          {"trees", arr}};
                emit(glob, j.dump(2) + "\n");
            }
            return kExitOk;
        }

        if (*analyze) {
            Graph g = read_graph(an_input);
            an_dp.validate();
            auto cyc = count_cycles(g, an_N);
            json by_len = json::object();
            for (int l = 3; l <= an_N; ++l) by_len[std::to_string(l)] = cyc[l];
            json j = {{"phi_log", phi_log(g, an_dp)},
                      {"is_bad", is_bad(g, an_dp)},
                      {"is_self_bad", is_self_bad(g, an_dp)},
                      {"is_admissible", is_admissible(g, an_dp, an_N)},
                      {"cycles_by_length", by_len}};
            emit(glob, j.dump(2) + "\n");
            return kExitOk;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFailed;
    }
    return kExitUsage;
}
