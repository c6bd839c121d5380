#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "qchrome/clumps.hpp"
#include "qchrome/coloring.hpp"
#include "qchrome/critgen.hpp"
#include "qchrome/hierarchy.hpp"
#include "qchrome/orthrank.hpp"
#include "qchrome/xi_sdp.hpp"

namespace qchrome::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kFormatVersion = 1;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LogLevel { Quiet, Warn, Info, Debug };

LogLevel log_level() {
    const char* v = std::getenv("QCHROME_LOG");
    if (!v) return LogLevel::Warn;
    std::string s(v);
    if (s == "quiet" || s == "0") return LogLevel::Quiet;
    if (s == "info" || s == "2") return LogLevel::Info;
    if (s == "debug" || s == "3") return LogLevel::Debug;
    return LogLevel::Warn;
}

struct RunConfig {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::string output;
    int n = 0;
    int k = 0;
    std::uint64_t seed = 1;
    std::string eps = "1/1000";
    double tol = 1e-6;
    int max_iter = 20000;
    int workers = 1;
    std::string split = "0/1";
    std::size_t budget_nodes = 100000;
    double budget_seconds = 0.0;
    bool sorted = false;
    json extra = json::object();

    json to_json() const {
        json j = {{"tool", "qchrome"},  {"format_version", kFormatVersion},
                  {"subcommand", subcommand}, {"inputs", inputs},
                  {"output", output},  {"n", n},
                  {"k", k},            {"seed", seed},
                  {"eps", eps},        {"tol", tol},
                  {"max_iter", max_iter}, {"workers", workers},
                  {"split", split},    {"budget_nodes", budget_nodes},
                  {"budget_seconds", budget_seconds}, {"sorted", sorted}};
        for (auto& [key, v] : extra.items()) j[key] = v;
        return j;
    }
};

class Context {
public:
    Context(std::istream& in, std::ostream& out, std::ostream& err) : in_(in), out_(out), err_(err), level_(log_level()) {}

    std::istream& in() { return in_; }

    void emit(const std::string& line) {
        std::lock_guard<std::mutex> lock(mu_);
        out_ << line << '\n';
        out_.flush();
    }
    void log(LogLevel lvl, const std::string& msg) {
        if (lvl > level_ || level_ == LogLevel::Quiet) return;
        std::lock_guard<std::mutex> lock(mu_);
        err_ << "qchrome: " << msg << '\n';
    }

private:
    std::istream& in_;
    std::ostream& out_;
    std::ostream& err_;
    LogLevel level_;
    std::mutex mu_;
};

Rational parse_eps(const std::string& s) {
    Rational q;
    try {
        auto dot = s.find('.');
        if (dot == std::string::npos) {
            q = parse_rational(s);
        } else {
            std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
            if (whole.empty()) whole = "0";
            std::string den = "1" + std::string(frac.size(), '0');
            q = parse_rational(whole + frac + "/" + den);
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--eps: ") + e.what());
    }
    if (sgn(q) <= 0 || q >= 1) throw UsageError("--eps must lie in (0, 1)");
    return q;
}

std::pair<int, int> parse_split(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            std::size_t a = 0, b = 0;
            int r = std::stoi(s.substr(0, slash), &a);
            int m = std::stoi(s.substr(slash + 1), &b);
            if (a == slash && b == s.size() - slash - 1 && m >= 1 && r >= 0 && r < m) return {r, m};
        }
    } catch (const std::exception&) {
    }
    throw UsageError("--split expects R/M with 0 <= R < M");
}

Graph parse_graph_arg(const std::string& text) {
    try {
        return parse_graph6(text);
    } catch (const std::exception& e) {
        throw UsageError("bad graph6 '" + text + "': " + e.what());
    }
}

std::string strip(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    s.erase(0, i);
    if (s.rfind(">>graph6<<", 0) == 0) s.erase(0, 10);
    return s;
}

/// Graph6 strings from the positional list, or one per stdin line.
std::vector<std::string> graph_inputs(const std::vector<std::string>& positional, std::istream& in) {
    std::vector<std::string> out;
    auto take = [&](const std::string& raw) {
        std::string s = strip(raw);
        if (!s.empty() && s[0] != '#' && s[0] != '>') out.push_back(s);
    };
    if (!positional.empty() && !(positional.size() == 1 && positional[0] == "-")) {
        for (const auto& p : positional) take(p);
        return out;
    }
    for (std::string line; std::getline(in, line);) take(line);
    return out;
}

std::string read_text(const std::string& path, std::istream& in) {
    if (path == "-") {
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::vector<VectorClump> load_clump_arg(const std::string& path, std::istream& in) {
    std::string text = read_text(path, in);
    try {
        return parse_clumps_json(text);
    } catch (const std::exception& e) {
        throw UsageError("bad clump file " + path + ": " + e.what());
    }
}

std::string xi_certificate_file(const SdpCertificate& c, const json& config) {
    return "# qchrome xi-sdp certificate\n# config " + config.dump() + "\n" + c.to_text();
}

std::string hierarchy_certificate_file(const HierarchyCertificate& c, const json& config) {
    json doc = json::parse(c.to_json());
    doc["config"] = config;
    return doc.dump() + "\n";
}

/// Runs fn(i) for every index on `workers` threads; records are emitted as
/// they finish, or in index order when sorted.
void fan_out(Context& ctx, std::size_t count, int workers, bool sorted, const std::function<std::string(std::size_t)>& fn) {
    workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(count, 1))));
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::vector<std::optional<std::string>> done(count);
    std::size_t printed = 0;
    std::exception_ptr failure;
    auto work = [&] {
        while (true) {
            std::size_t i = next++;
            if (i >= count) return;
            std::string rec;
            try {
                rec = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure) failure = std::current_exception();
                next = count;
                return;
            }
            if (!sorted) {
                ctx.emit(rec);
                continue;
            }
            std::lock_guard<std::mutex> lock(mu);
            done[i] = std::move(rec);
            while (printed < count && done[printed]) {
                ctx.emit(*done[printed]);
                done[printed].reset();
                ++printed;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

SdpOptions sdp_options(const RunConfig& cfg) {
    SdpOptions o;
    o.tol = cfg.tol;
    o.max_iter = cfg.max_iter;
    return o;
}

// subcommands -----------------------------------------------------------------

int cmd_critgen(Context& ctx, RunConfig& cfg, std::size_t num_sets, std::size_t num_edges, std::size_t cap, int split_level) {
    auto [r, m] = parse_split(cfg.split);
    EnumerationConfig ec;
    ec.n = cfg.n;
    ec.k = cfg.k;
    ec.num_sets = num_sets;
    ec.num_edges = num_edges;
    ec.assignment_cap = cap;
    ec.split_residue = r;
    ec.split_modulus = m;
    ec.split_level = split_level;
    try {
        ec.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    cfg.extra["num_sets"] = num_sets;
    cfg.extra["num_edges"] = num_edges;
    cfg.extra["assignment_cap"] = cap;
    cfg.extra["split_level"] = ec.effective_split_level();
    ctx.emit("# qchrome critgen " + cfg.to_json().dump());

    const int w = std::max(1, cfg.workers);
    std::uint64_t total = 0;
    if (w == 1 && !cfg.sorted) {
        total = enumerate_edge_critical(ec, [&](const Graph& g) { ctx.emit(emit_graph6(g)); });
    } else {
        // worker i takes residue r + m*i of the refined modulus m*w
        std::vector<std::vector<std::string>> bufs(w);
        std::vector<std::uint64_t> counts(w, 0);
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex mu;
        for (int i = 0; i < w; ++i)
            pool.emplace_back([&, i] {
                try {
                    EnumerationConfig c = ec;
                    c.split_residue = r + m * i;
                    c.split_modulus = m * w;
                    counts[i] = enumerate_edge_critical(c, [&](const Graph& g) { bufs[i].push_back(emit_graph6(g)); });
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!failure) failure = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
        std::vector<std::string> all;
        for (int i = 0; i < w; ++i) {
            total += counts[i];
            all.insert(all.end(), bufs[i].begin(), bufs[i].end());
        }
        if (cfg.sorted) std::sort(all.begin(), all.end());
        for (const auto& s : all) ctx.emit(s);
    }
    ctx.emit("# count " + std::to_string(total));
    return 0;
}

int cmd_chromatic(Context& ctx, RunConfig& cfg) {
    auto graphs = graph_inputs(cfg.inputs, ctx.in());
    json config = cfg.to_json();
    for (const auto& s : graphs) {
        Graph g = parse_graph_arg(s);
        int chi = chromatic_number(g);
        json witness = json::array();
        if (g.order() > 0) {
            auto w = is_k_colorable(g, chi);
            if (!w || !w->is_proper(g)) throw std::runtime_error("no witness for the computed chromatic number");
            for (int c : w->colors) witness.push_back(c + 1);
        }
        json rec = {{"format", "qchrome-chromatic"}, {"version", kFormatVersion}, {"graph6", s},
                    {"n", g.order()}, {"chi", chi}, {"witness", witness}, {"config", config}};
        ctx.emit(rec.dump());
    }
    return 0;
}

int cmd_xi_sdp(Context& ctx, RunConfig& cfg, bool certify) {
    auto graphs = graph_inputs(cfg.inputs, ctx.in());
    Rational eps = parse_eps(cfg.eps);
    certify = certify || !cfg.output.empty();
    json config = cfg.to_json();
    auto opts = sdp_options(cfg);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        Graph g = parse_graph_arg(graphs[i]);
        double value = xi_sdp(g, opts);
        json rec = {{"format", "qchrome-xi-sdp"}, {"version", kFormatVersion}, {"graph6", graphs[i]},
                    {"n", g.order()}, {"value", value}, {"config", config}};
        if (certify) {
            int k = cfg.k > 0 ? cfg.k : static_cast<int>(std::floor(value - eps.get_d())) + 1;
            auto res = certify_lower_bound(g, k, eps, opts);
            json c = {{"k", k}, {"claim", "xi_sdp >= " + format_rational(Rational(k - 1) + eps)}};
            if (res.certificate) {
                auto chk = check_certificate(*res.certificate);
                c["valid"] = chk.ok;
                c["bound"] = format_rational(res.certificate->bound);
                if (!chk.ok) c["reason"] = chk.reason;
                if (!cfg.output.empty()) {
                    fs::path p = graphs.size() == 1 ? fs::path(cfg.output) : fs::path(cfg.output) / (std::to_string(i + 1) + ".xi.cert");
                    write_text(p, xi_certificate_file(*res.certificate, config));
                    c["path"] = p.string();
                }
            } else {
                c["valid"] = false;
                c["reason"] = res.reason;
            }
            rec["certificate"] = c;
        }
        ctx.emit(rec.dump());
    }
    return 0;
}

int cmd_pipeline(Context& ctx, RunConfig& cfg) {
    auto graphs = graph_inputs(cfg.inputs, ctx.in());
    std::vector<Graph> parsed;
    for (const auto& s : graphs) parsed.push_back(parse_graph_arg(s));
    PipelineOptions po;
    po.seed = cfg.seed;
    po.eps = parse_eps(cfg.eps);
    po.sdp = sdp_options(cfg);
    po.hierarchy.sdp = sdp_options(cfg);
    json config = cfg.to_json();
    std::atomic<int> undetermined{0};
    fan_out(ctx, graphs.size(), cfg.workers, cfg.sorted, [&](std::size_t i) {
        const Graph& g = parsed[i];
        json rec = {{"format", "qchrome-pipeline"}, {"version", kFormatVersion}, {"index", i + 1},
                    {"graph6", graphs[i]}, {"n", g.order()}, {"config", config}};
        int chi = chromatic_number(g);
        if (chi < 3) {
            rec["chi"] = chi;
            rec["status"] = "skipped";
            rec["reason"] = "chromatic number below 3";
            return rec.dump();
        }
        PipelineOptions o = po;
        o.chi = chi;
        auto rep = quantum_lb_pipeline(g, o);
        rec["chi"] = rep.chi;
        rec["k"] = rep.k;
        rec["status"] = rep.resolved ? "resolved" : "undetermined";
        rec["resolved_by"] = rep.resolved ? json(rep.resolved_by) : json(nullptr);
        json steps = json::array();
        for (const auto& st : rep.steps)
            steps.push_back({{"name", st.name}, {"success", st.success}, {"exact", st.exact}, {"value", st.value},
                             {"dim", st.dim}, {"seconds", st.seconds}, {"note", st.note}});
        rec["steps"] = steps;
        rec["seconds"] = rep.seconds;
        rec["certificate"] = nullptr;
        if (!cfg.output.empty()) {
            fs::path dir(cfg.output);
            if (rep.xi_certificate) {
                fs::path p = dir / (std::to_string(i + 1) + ".xi.cert");
                write_text(p, xi_certificate_file(*rep.xi_certificate, config));
                rec["certificate"] = p.string();
            } else if (rep.hierarchy_certificate) {
                fs::path p = dir / (std::to_string(i + 1) + ".sync.json");
                write_text(p, hierarchy_certificate_file(*rep.hierarchy_certificate, config));
                rec["certificate"] = p.string();
            }
        }
        if (!rep.resolved) ++undetermined;
        ctx.log(LogLevel::Info, graphs[i] + ": " + (rep.resolved ? "resolved by " + rep.resolved_by : "undetermined"));
        return rec.dump();
    });
    ctx.log(LogLevel::Info, std::to_string(graphs.size()) + " graphs, " + std::to_string(undetermined.load()) + " undetermined");
    return 0;
}

int cmd_clump_graph(Context& ctx, RunConfig& cfg) {
    auto clumps = load_clump_arg(cfg.inputs.at(0), ctx.in());
    Graph g = orthogonality_graph(clumps);
    ctx.emit("# qchrome clump-graph " + cfg.to_json().dump());
    ctx.emit(emit_graph6(g));
    return 0;
}

int cmd_lift_verify(Context& ctx, RunConfig& cfg) {
    auto clumps = load_clump_arg(cfg.inputs.at(0), ctx.in());
    Graph g = orthogonality_graph(clumps);
    auto fam = lift_to_quantum_coloring(g, clumps);
    auto v = verify_quantum_coloring(g, fam, fam.outcomes);
    json rec = {{"format", "qchrome-lift-verify"}, {"version", kFormatVersion}, {"graph6", emit_graph6(g)},
                {"n", g.order()}, {"edges", g.edge_count()}, {"dim", fam.dim}, {"outcomes", fam.outcomes},
                {"rank", fam.rank}, {"exact", fam.exact}, {"verified", v.ok}, {"detail", v.detail},
                {"config", cfg.to_json()}};
    ctx.emit(rec.dump());
    return 0;
}

int cmd_orthrank(Context& ctx, RunConfig& cfg, bool no_memo) {
    Graph g = parse_graph_arg(cfg.inputs.at(0));
    OrthrankOptions o;
    o.seed = cfg.seed;
    o.max_nodes = cfg.budget_nodes;
    o.max_seconds = cfg.budget_seconds;
    o.eps = parse_eps(cfg.eps);
    o.sdp = sdp_options(cfg);
    o.memo = !no_memo;
    cfg.extra["memo"] = o.memo;
    ProofTree t;
    try {
        t = prove_no_k_dim_rep(g, cfg.k, o);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    json doc = json::parse(t.to_json());
    doc["config"] = cfg.to_json();
    ctx.log(LogLevel::Info, std::string(t.success ? "proof found" : "no proof") + ", " + std::to_string(t.nodes_visited) + " nodes");
    if (cfg.output.empty()) {
        ctx.emit(doc.dump());
    } else {
        write_text(cfg.output, doc.dump() + "\n");
        json rec = {{"format", "qchrome-orthrank"}, {"version", kFormatVersion}, {"graph6", cfg.inputs[0]},
                    {"k", cfg.k}, {"success", t.success}, {"budget_exhausted", t.budget_exhausted},
                    {"nodes_visited", t.nodes_visited}, {"sdp_evaluations", t.sdp_evaluations},
                    {"seconds", t.seconds}, {"path", cfg.output}, {"config", cfg.to_json()}};
        ctx.emit(rec.dump());
    }
    return 0;
}

int cmd_check_cert(Context& ctx, RunConfig& cfg) {
    for (const auto& path : cfg.inputs) {
        std::string text = read_text(path, ctx.in());
        json rec = {{"format", "qchrome-check"}, {"version", kFormatVersion}, {"path", path}};
        std::string kind = "xi-sdp";
        try {
            auto first = text.find_first_not_of(" \t\r\n");
            if (first != std::string::npos && text[first] == '{') {
                json doc = json::parse(text);
                kind = doc.value("format", std::string("unknown"));
                if (kind == "orthrank-proof-tree") {
                    auto t = ProofTree::from_json(text);
                    auto v = check_proof_tree(t);
                    rec["valid"] = v.ok;
                    rec["detail"] = v.detail;
                    rec["graph6"] = t.nodes.empty() ? "" : t.nodes[t.root].graph6;
                    rec["claim"] = "no " + std::to_string(t.k) + "-dimensional orthogonal representation";
                } else if (kind == "sync-hierarchy-certificate") {
                    auto c = HierarchyCertificate::from_json(text);
                    auto v = check_hierarchy_certificate(c);
                    rec["valid"] = v.ok;
                    rec["detail"] = v.reason;
                    rec["graph6"] = c.graph6;
                    rec["bound"] = format_rational(c.bound);
                    rec["claim"] = "synchronous value of the " + std::to_string(c.k) + "-colouring game is below 1";
                } else {
                    rec["valid"] = false;
                    rec["detail"] = "unknown artifact format";
                }
            } else {
                auto c = SdpCertificate::parse(text);
                auto v = check_certificate(c);
                rec["valid"] = v.ok;
                rec["detail"] = v.reason;
                rec["graph6"] = c.graph6;
                rec["bound"] = format_rational(c.bound);
                rec["claim"] = "xi_sdp >= " + format_rational(Rational(c.k - 1) + c.eps);
            }
        } catch (const std::exception& e) {
            rec["valid"] = false;
            rec["detail"] = std::string("malformed: ") + e.what();
        }
        rec["kind"] = kind;
        ctx.emit(rec.dump());
    }
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    Context ctx(in, out, err);
    CLI::App app{"Quantum chromatic number experiments"};
    app.name("qchrome");
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_sdp = [&](CLI::App* s) {
        s->add_option("--tol", cfg.tol, "solver tolerance")->check(CLI::PositiveNumber);
        s->add_option("--max-iter", cfg.max_iter, "solver iteration cap")->check(CLI::PositiveNumber);
    };

    auto* critgen = app.add_subcommand("critgen", "enumerate edge-k-critical graphs on n vertices");
    std::size_t num_sets = 0, num_edges = 4, cap = 5000;
    int split_level = 0;
    critgen->add_option("-n,--n", cfg.n, "number of vertices")->required();
    critgen->add_option("-k,--k", cfg.k, "chromatic number")->required();
    critgen->add_option("--split", cfg.split, "residue class R/M");
    critgen->add_option("--workers", cfg.workers, "threads")->check(CLI::PositiveNumber);
    critgen->add_flag("--sorted", cfg.sorted, "sort output lines");
    critgen->add_option("--num-sets", num_sets, "independent sets kept per parent (0: all)");
    critgen->add_option("--num-edges", num_edges, "stored edges per parent");
    critgen->add_option("--assignment-cap", cap, "colouring cap per stored edge");
    critgen->add_option("--split-level", split_level, "depth at which nodes are dealt out (0: n-3)");

    auto* chromatic = app.add_subcommand("chromatic", "chromatic number and a colouring");
    chromatic->add_option("graphs", cfg.inputs, "graph6 strings (default: stdin lines)");

    auto* xi = app.add_subcommand("xi-sdp", "xi_SDP value and optional certificate");
    bool certify = false;
    xi->add_option("graphs", cfg.inputs, "graph6 strings (default: stdin lines)");
    xi->add_option("--k", cfg.k, "certify xi_sdp >= k - 1 + eps (default from the value)");
    xi->add_option("--eps", cfg.eps, "certificate margin");
    xi->add_flag("--certify", certify, "attempt an exact certificate");
    xi->add_option("--cert-out", cfg.output, "certificate file (directory for several graphs)");
    add_sdp(xi);

    auto* pipeline = app.add_subcommand("pipeline", "prove chi_qc = chi for each input graph");
    pipeline->add_option("graphs", cfg.inputs, "graph6 strings (default: stdin lines)");
    pipeline->add_option("--seed", cfg.seed, "seed of the S'' monomial set");
    pipeline->add_option("--eps", cfg.eps, "xi_SDP certificate margin");
    pipeline->add_option("--workers", cfg.workers, "threads")->check(CLI::PositiveNumber);
    pipeline->add_flag("--sorted", cfg.sorted, "emit records in input order");
    pipeline->add_option("--cert-out", cfg.output, "directory for certificates");
    add_sdp(pipeline);

    auto* clump = app.add_subcommand("clump-graph", "orthogonality graph of a clump file");
    clump->add_option("file", cfg.inputs, "clump JSON file ('-': stdin)")->required()->expected(1);

    auto* lift = app.add_subcommand("lift-verify", "lift a clump representation and verify it");
    lift->add_option("file", cfg.inputs, "clump JSON file ('-': stdin)")->required()->expected(1);

    auto* orth = app.add_subcommand("orthrank", "prove that no k-dimensional orthogonal representation exists");
    bool no_memo = false;
    orth->add_option("graph", cfg.inputs, "graph6 string")->required()->expected(1);
    orth->add_option("-k,--k", cfg.k, "dimension")->required();
    orth->add_option("--seed", cfg.seed, "search seed");
    orth->add_option("--eps", cfg.eps, "certificate margin");
    orth->add_option("--budget-nodes", cfg.budget_nodes, "node budget");
    orth->add_option("--budget-seconds", cfg.budget_seconds, "time budget (0: none)");
    orth->add_flag("--no-memo", no_memo, "disable isomorphism memoisation");
    orth->add_option("--cert-out", cfg.output, "proof tree file (default: stdout)");
    add_sdp(orth);

    auto* check = app.add_subcommand("check-cert", "exactly re-validate certificates and proof trees");
    check->add_option("files", cfg.inputs, "artifact files ('-': stdin)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        auto* sub = app.get_subcommands().front();
        cfg.subcommand = sub->get_name();
        if (sub == critgen) return cmd_critgen(ctx, cfg, num_sets, num_edges, cap, split_level);
        if (sub == chromatic) return cmd_chromatic(ctx, cfg);
        if (sub == xi) return cmd_xi_sdp(ctx, cfg, certify);
        if (sub == pipeline) return cmd_pipeline(ctx, cfg);
        if (sub == clump) return cmd_clump_graph(ctx, cfg);
        if (sub == lift) return cmd_lift_verify(ctx, cfg);
        if (sub == orth) return cmd_orthrank(ctx, cfg, no_memo);
        if (sub == check) return cmd_check_cert(ctx, cfg);
        return 2;
    } catch (const UsageError& e) {
        err << "qchrome: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "qchrome: internal error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace qchrome::cli
