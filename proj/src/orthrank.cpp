#include "qchrome/orthrank.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "qchrome/canonical.hpp"

namespace qchrome {

void check_branch_copy(const Graph& g, const BranchCopy& copy, int k) {
    if (k < 3) throw std::invalid_argument("branch copy: k must be at least 3");
    if (static_cast<int>(copy.left.size()) != k - 1)
        throw std::invalid_argument("branch copy: left side needs k - 1 = " + std::to_string(k - 1) + " vertices");
    Bits seen = 0;
    auto take = [&](int v) {
        if (v < 0 || v >= g.order()) throw std::invalid_argument("branch copy: vertex out of range");
        if (seen & bit(v)) throw std::invalid_argument("branch copy: repeated vertex " + std::to_string(v + 1));
        seen |= bit(v);
    };
    for (int v : copy.left) take(v);
    take(copy.right[0]);
    take(copy.right[1]);
    for (int v : copy.left)
        for (int w : copy.right)
            if (!g.adjacent(v, w))
                throw std::invalid_argument("branch copy: " + std::to_string(v + 1) + " and " + std::to_string(w + 1) +
                                            " are not adjacent");
}

std::vector<BranchGraph> branch_graphs(const Graph& g, const BranchCopy& copy, int k) {
    check_branch_copy(g, copy, k);
    std::vector<BranchGraph> out;
    const int a = copy.right[0], b = copy.right[1];
    // the higher vertex is deleted so lower labels stay put
    auto merge = [&](int u, int v) { return vertex_identify(g, std::max(u, v), std::min(u, v)); };
    if (!g.adjacent(a, b)) out.push_back({BranchGraph::Kind::IdentifyRight, bit(a) | bit(b), merge(a, b)});
    const auto& left = copy.left;
    for (std::size_t x = 0; x < left.size(); ++x)
        for (std::size_t y = x + 1; y < left.size(); ++y)
            if (!g.adjacent(left[x], left[y]))
                out.push_back({BranchGraph::Kind::IdentifyLeft, bit(left[x]) | bit(left[y]), merge(left[x], left[y])});
    const int m = static_cast<int>(left.size());
    for (unsigned sub = 1; sub < (1U << m); ++sub) {
        if (std::popcount(sub) < 3) continue;
        Bits s = 0;
        for (int t = 0; t < m; ++t)
            if (sub >> t & 1U) s |= bit(left[t]);
        // dropped when some member is adjacent to all the others
        bool dropped = false;
        for_each_bit(s, [&](int u) {
            if ((g.neighbors(u) & s) == (s & ~bit(u))) dropped = true;
        });
        if (!dropped) out.push_back({BranchGraph::Kind::SetIdentify, s, set_identify(g, s)});
    }
    std::sort(out.begin() + std::count_if(out.begin(), out.end(), [](const BranchGraph& bg) {
                  return bg.kind != BranchGraph::Kind::SetIdentify;
              }),
              out.end(), [](const BranchGraph& x, const BranchGraph& y) { return x.vertices < y.vertices; });
    return out;
}

namespace {

bool suitable(const Graph& g, const BranchCopy& copy, int k) {
    for (const auto& bg : branch_graphs(g, copy, k))
        if (bg.kind == BranchGraph::Kind::SetIdentify && bg.graph.edge_count() == g.edge_count()) return false;
    return true;
}

// k - 1 left vertices from the common neighbourhood, chosen by index list
std::optional<BranchCopy> try_pair(const Graph& g, int k, int a, int b, const std::vector<int>& pick) {
    BranchCopy c;
    c.left = pick;
    std::sort(c.left.begin(), c.left.end());
    c.right[0] = std::min(a, b);
    c.right[1] = std::max(a, b);
    if (suitable(g, c, k)) return c;
    return std::nullopt;
}

}  // namespace

std::optional<BranchCopy> find_branchable_biclique(const Graph& g, int k, std::mt19937_64& rng, std::size_t max_draws) {
    if (k < 3) throw std::invalid_argument("find_branchable_biclique: k must be at least 3");
    const int n = g.order();
    if (n < k + 1) return std::nullopt;
    if (max_draws == 0) max_draws = 10 * static_cast<std::size_t>(n) * n;
    for (std::size_t draw = 0; draw < max_draws; ++draw) {
        int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
        if (a == b) continue;
        std::vector<int> common = bits_to_vector(g.neighbors(a) & g.neighbors(b));
        if (static_cast<int>(common.size()) < k - 1) continue;
        // partial Fisher-Yates for k - 1 picks
        for (int t = 0; t < k - 1; ++t) {
            int r = t + static_cast<int>(rng() % (common.size() - t));
            std::swap(common[t], common[r]);
        }
        common.resize(k - 1);
        if (auto c = try_pair(g, k, a, b, common)) return c;
    }
    // exhaustive sweep
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            std::vector<int> common = bits_to_vector(g.neighbors(a) & g.neighbors(b));
            const int m = static_cast<int>(common.size());
            if (m < k - 1) continue;
            std::vector<int> idx(k - 1);
            for (int t = 0; t < k - 1; ++t) idx[t] = t;
            while (true) {
                std::vector<int> pick;
                for (int t : idx) pick.push_back(common[t]);
                if (auto c = try_pair(g, k, a, b, pick)) return c;
                int t = k - 2;
                while (t >= 0 && idx[t] == m - (k - 1) + t) --t;
                if (t < 0) break;
                ++idx[t];
                for (int u = t + 1; u < k - 1; ++u) idx[u] = idx[u - 1] + 1;
            }
        }
    return std::nullopt;
}

std::string to_string(ProofNode::Outcome o) {
    switch (o) {
        case ProofNode::Outcome::Certificate: return "certificate";
        case ProofNode::Outcome::Branch: return "branch";
        case ProofNode::Outcome::AllDropped: return "all-dropped";
        case ProofNode::Outcome::Failure: return "failure";
        case ProofNode::Outcome::Budget: return "budget";
    }
    return "unknown";
}

// Prover ---------------------------------------------------------------------

namespace {

class Prover {
public:
    Prover(int k, const OrthrankOptions& opts, ProofTree& tree)
        : k_(k), opts_(opts), tree_(tree), rng_(opts.seed), t0_(std::chrono::steady_clock::now()) {}

    // returns the node index; success is read from proven_
    int prove(const Graph& g) {
        CanonicalForm form;
        if (opts_.memo) {
            form = canonical_form(g);
            auto it = memo_.find(form);
            if (it != memo_.end()) return it->second;
        }
        int id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.push_back({});
        proven_.push_back(false);
        tree_.nodes[id].graph6 = emit_graph6(g);
        if (opts_.memo) memo_[form] = id;

        if (out_of_budget()) {
            tree_.budget_exhausted = true;
            tree_.nodes[id].outcome = ProofNode::Outcome::Budget;
            return id;
        }
        ++tree_.nodes_visited;
        ++tree_.sdp_evaluations;
        auto cert = certify_lower_bound(g, k_ + 1, opts_.eps, opts_.sdp);
        if (cert.certificate) {
            tree_.nodes[id].outcome = ProofNode::Outcome::Certificate;
            tree_.nodes[id].certificate = std::move(cert.certificate);
            proven_[id] = true;
            return id;
        }
        if (k_ < 3) {
            tree_.nodes[id].outcome = ProofNode::Outcome::Failure;
            tree_.nodes[id].note = "no certificate and no branching below k = 3";
            return id;
        }
        auto copy = find_branchable_biclique(g, k_, rng_);
        if (!copy) {
            tree_.nodes[id].outcome = ProofNode::Outcome::Failure;
            tree_.nodes[id].note = "no branchable copy of K_{k-1,2}; xi_sdp ~ " + std::to_string(cert.numeric_value);
            return id;
        }
        tree_.nodes[id].copy = copy;
        auto branches = branch_graphs(g, *copy, k_);
        if (branches.empty()) {
            tree_.nodes[id].outcome = ProofNode::Outcome::AllDropped;
            proven_[id] = true;
            return id;
        }
        tree_.nodes[id].outcome = ProofNode::Outcome::Branch;
        bool all = true;
        for (const auto& bg : branches) {
            int child = prove(bg.graph);
            tree_.nodes[id].children.push_back(child);
            if (!proven_[child]) {
                all = false;
                break;
            }
        }
        proven_[id] = all;
        return id;
    }

    bool proven(int id) const { return proven_[id]; }

private:
    bool out_of_budget() const {
        if (tree_.nodes_visited >= opts_.max_nodes) return true;
        if (opts_.max_seconds > 0 &&
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count() > opts_.max_seconds)
            return true;
        return false;
    }

    int k_;
    const OrthrankOptions& opts_;
    ProofTree& tree_;
    std::mt19937_64 rng_;
    std::chrono::steady_clock::time_point t0_;
    std::map<CanonicalForm, int> memo_;
    std::vector<bool> proven_;
};

}  // namespace

ProofTree prove_no_k_dim_rep(const Graph& g, int k, const OrthrankOptions& opts) {
    if (k < 2) throw std::invalid_argument("prove_no_k_dim_rep: k must be at least 2");
    if (g.order() < 1) throw std::invalid_argument("prove_no_k_dim_rep: empty graph");
    auto t0 = std::chrono::steady_clock::now();
    ProofTree tree;
    tree.k = k;
    tree.seed = opts.seed;
    Prover p(k, opts, tree);
    tree.root = p.prove(g);
    tree.success = p.proven(tree.root);
    tree.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return tree;
}

// Serialisation --------------------------------------------------------------

std::string ProofTree::to_json() const {
    using nlohmann::json;
    json nodes_j = json::array();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& nd = nodes[i];
        json j = {{"id", i}, {"graph6", nd.graph6}, {"outcome", to_string(nd.outcome)}};
        if (nd.copy) {
            std::vector<int> left;
            for (int v : nd.copy->left) left.push_back(v + 1);
            j["copy"] = {{"left", left}, {"right", {nd.copy->right[0] + 1, nd.copy->right[1] + 1}}};
        }
        if (!nd.children.empty()) j["children"] = nd.children;
        if (nd.certificate) j["certificate"] = nd.certificate->to_text();
        if (!nd.note.empty()) j["note"] = nd.note;
        nodes_j.push_back(j);
    }
    json doc = {{"format", "orthrank-proof-tree"},
                {"version", 1},
                {"k", k},
                {"seed", seed},
                {"success", success},
                {"budget_exhausted", budget_exhausted},
                {"root", root},
                {"stats", {{"nodes_visited", nodes_visited}, {"sdp_evaluations", sdp_evaluations}, {"seconds", seconds}}},
                {"nodes", nodes_j}};
    return doc.dump(1);
}

ProofTree ProofTree::from_json(const std::string& text) {
    using nlohmann::json;
    ProofTree t;
    try {
        json doc = json::parse(text);
        if (doc.at("format") != "orthrank-proof-tree") throw std::invalid_argument("not a proof tree");
        if (doc.at("version").get<int>() != 1) throw std::invalid_argument("unsupported proof tree version");
        t.k = doc.at("k").get<int>();
        t.seed = doc.value("seed", std::uint64_t{0});
        t.success = doc.at("success").get<bool>();
        t.budget_exhausted = doc.value("budget_exhausted", false);
        t.root = doc.at("root").get<int>();
        if (doc.contains("stats")) {
            t.nodes_visited = doc["stats"].value("nodes_visited", std::size_t{0});
            t.sdp_evaluations = doc["stats"].value("sdp_evaluations", std::size_t{0});
            t.seconds = doc["stats"].value("seconds", 0.0);
        }
        for (const auto& j : doc.at("nodes")) {
            ProofNode nd;
            nd.graph6 = j.at("graph6").get<std::string>();
            std::string o = j.at("outcome").get<std::string>();
            bool known = false;
            for (auto cand : {ProofNode::Outcome::Certificate, ProofNode::Outcome::Branch, ProofNode::Outcome::AllDropped,
                              ProofNode::Outcome::Failure, ProofNode::Outcome::Budget})
                if (to_string(cand) == o) {
                    nd.outcome = cand;
                    known = true;
                }
            if (!known) throw std::invalid_argument("unknown outcome '" + o + "'");
            if (j.contains("copy")) {
                BranchCopy c;
                for (int v : j["copy"].at("left")) c.left.push_back(v - 1);
                auto r = j["copy"].at("right");
                if (r.size() != 2) throw std::invalid_argument("copy needs two right vertices");
                c.right[0] = r[0].get<int>() - 1;
                c.right[1] = r[1].get<int>() - 1;
                nd.copy = c;
            }
            if (j.contains("children")) nd.children = j["children"].get<std::vector<int>>();
            if (j.contains("certificate")) nd.certificate = SdpCertificate::parse(j["certificate"].get<std::string>());
            nd.note = j.value("note", std::string());
            t.nodes.push_back(std::move(nd));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("proof tree: ") + e.what());
    }
    return t;
}

// Checker --------------------------------------------------------------------

Verdict check_proof_tree(const ProofTree& tree) {
    Verdict res;
    if (!tree.success) {
        res.detail = "tree records no proof";
        return res;
    }
    if (tree.k < 2) {
        res.detail = "k must be at least 2";
        return res;
    }
    const int n = static_cast<int>(tree.nodes.size());
    if (tree.root < 0 || tree.root >= n) {
        res.detail = "root index out of range";
        return res;
    }
    // 0 unvisited, 1 on stack, 2 proven
    std::vector<int> state(n, 0);
    std::vector<Graph> graphs(n);
    std::vector<char> parsed(n, 0);
    std::string why;
    auto graph_of = [&](int i) -> const Graph& {
        if (!parsed[i]) {
            graphs[i] = parse_graph6(tree.nodes[i].graph6);
            parsed[i] = 1;
        }
        return graphs[i];
    };
    std::function<bool(int)> verify = [&](int i) -> bool {
        if (state[i] == 2) return true;
        if (state[i] == 1) {
            why = "node " + std::to_string(i) + " lies on a cycle";
            return false;
        }
        state[i] = 1;
        const ProofNode& nd = tree.nodes[i];
        const std::string at = "node " + std::to_string(i) + ": ";
        const Graph& g = graph_of(i);
        switch (nd.outcome) {
            case ProofNode::Outcome::Certificate: {
                if (!nd.certificate) return why = at + "certificate missing", false;
                if (nd.certificate->k != tree.k + 1) return why = at + "certificate is not for k + 1", false;
                Graph cg = parse_graph6(nd.certificate->graph6);
                if (!isomorphic(cg, g)) return why = at + "certificate is for a different graph", false;
                auto chk = check_certificate(*nd.certificate);
                if (!chk.ok) return why = at + chk.reason, false;
                break;
            }
            case ProofNode::Outcome::AllDropped:
            case ProofNode::Outcome::Branch: {
                if (!nd.copy) return why = at + "branch copy missing", false;
                std::vector<BranchGraph> expected;
                try {
                    expected = branch_graphs(g, *nd.copy, tree.k);
                } catch (const std::invalid_argument& e) {
                    return why = at + e.what(), false;
                }
                if (nd.outcome == ProofNode::Outcome::AllDropped) {
                    if (!expected.empty()) return why = at + "not every branch is dropped", false;
                    break;
                }
                if (expected.size() != nd.children.size())
                    return why = at + "expected " + std::to_string(expected.size()) + " branches, found " +
                                 std::to_string(nd.children.size()),
                           false;
                for (std::size_t c = 0; c < expected.size(); ++c) {
                    int ch = nd.children[c];
                    if (ch < 0 || ch >= n) return why = at + "child index out of range", false;
                    if (!isomorphic(graph_of(ch), expected[c].graph))
                        return why = at + "child " + std::to_string(c + 1) + " is not the expected branch graph", false;
                    if (!verify(ch)) return false;
                }
                break;
            }
            default:
                return why = at + "unproven leaf (" + to_string(nd.outcome) + ")", false;
        }
        state[i] = 2;
        return true;
    };
    try {
        res.ok = verify(tree.root);
    } catch (const std::exception& e) {
        res.ok = false;
        why = e.what();
    }
    res.detail = res.ok ? "" : why;
    return res;
}

}  // namespace qchrome
