#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qchrome/exact.hpp"
#include "qchrome/graph.hpp"
#include "qchrome/sdp.hpp"
#include "qchrome/xi_sdp.hpp"

namespace qchrome {

/// Measurement symbol E^x_a, stored as x * k + a (both 0-based).
using Word = std::vector<int>;

inline int symbol(int x, int a, int k) { return x * k + a; }

/// Idempotence and orthogonality within one measurement; nullopt is Zero.
std::optional<Word> reduce_word(const Word& w, int k);

/// Key of tau(w) under traciality: cyclic reduction, then the least rotation
/// of w or its reversal. nullopt when the trace vanishes.
std::optional<Word> trace_key(const Word& w, int k);

enum class Level { S1, S, SPrime, SDoublePrime, Full };
std::string to_string(Level l);
/// "S1", "S", "S'", "S''", "full". Throws std::invalid_argument otherwise.
Level parse_level(const std::string& s);

struct MonomialSet {
    Level level = Level::S1;
    std::uint64_t seed = 0;
    /// Reduced, distinct, nonzero; words[0] is the empty word, then the
    /// length-1 words in symbol order.
    std::vector<Word> words;
};

/// S1: length <= 1. S: adds E^x_c E^y_c for x < y. S': all x != y.
/// S'': every E^x_a E^y_b with x < y, and each one with x > y kept with
/// probability 1/2 (seeded). Full: all of degree two.
MonomialSet monomial_set(const Graph& g, int k, Level level, std::uint64_t seed = 0);

/// Class structure of the pseudo-state matrix Gamma[u][v] = tau(u^R v).
struct SyncProgram {
    Graph graph;
    int k = 0;
    std::vector<Word> words;
    /// Uniform weight of each legal ordered input pair (x = y or an edge).
    Rational q;

    /// Upper-triangle position (svec order of SymMatrix::index) -> class.
    std::vector<int> position_class;
    int num_classes = 0;
    /// Per class: fixed value (zero classes are fixed at 0) or free.
    std::vector<char> fixed;
    std::vector<Rational> value;
    /// Objective coefficient of each class (sum over its positions).
    std::vector<Rational> objective;

    /// Completeness rows over free classes: sum coef * t_class = rhs.
    struct Row {
        std::vector<std::pair<int, Rational>> terms;
        Rational rhs;
    };
    std::vector<Row> rows;
    /// Words w whose diagonal class is free; each carries Gamma[w][w] <= 1.
    std::vector<int> diag_words;
    /// Free classes of traces of length <= 2, which are nonnegative
    /// (tau(E F) = tau(E F E) >= 0 for projections).
    std::vector<int> nonneg_classes;

    SdpProblem problem;
};

/// Throws std::invalid_argument when the word list lacks the empty word or a
/// length-1 word, or repeats a word.
SyncProgram build_sync_program(const Graph& g, int k, const std::vector<Word>& words);
inline SyncProgram build_sync_program(const Graph& g, int k, const MonomialSet& m) { return build_sync_program(g, k, m.words); }

/// Lagrangian certificate that the game value is at most `bound`:
/// Z psd, lambda >= 0, nu >= 0, and for every free class K
///   c_K + <Z, B_K> + sum_r mu_r a_rK - sum_{w: (w,w) in K} lambda_w + nu_K = 0.
struct HierarchyCertificate {
    std::string graph6;
    int k = 0;
    std::vector<Word> words;
    std::vector<Rational> mu;        ///< one per completeness row
    std::vector<Rational> lambda;    ///< one per diag word
    std::vector<Rational> nu;        ///< one per nonnegative class
    RationalMatrix z;
    Rational bound;

    std::string to_json() const;
    /// Throws std::invalid_argument on malformed input.
    static HierarchyCertificate from_json(const std::string& text);
};

struct HierarchyCheck {
    bool ok = false;
    std::string reason;
    Rational bound;
};

/// Exact replay; ok means the synchronous value is at most the stated bound
/// and the stated bound is below 1.
HierarchyCheck check_hierarchy_certificate(const HierarchyCertificate& cert);

struct SyncResult {
    Level level = Level::S1;
    int dim = 0;
    double value = 1.0;          ///< primal objective
    double dual_value = 1.0;
    SdpStatus status = SdpStatus::MaxIter;
    /// value and dual value both at most 1 - 10 tol
    bool below_one = false;
    std::optional<HierarchyCertificate> certificate;
    std::string note;
    double seconds = 0.0;
};

struct HierarchyOptions {
    SdpOptions sdp;
    /// Exact certification is attempted when 1 - value exceeds this.
    double certify_margin = 1e-3;
    bool certify = true;
};

/// Upper bound on the synchronous value of the k-colouring game.
SyncResult sync_value_upper_bound(const Graph& g, int k, const MonomialSet& m, const HierarchyOptions& opts = {});

struct PipelineStep {
    std::string name;      ///< "xi-sdp", "S", "S'", "S''"
    bool success = false;
    bool exact = false;    ///< success backed by an exactly checked certificate
    double value = 0.0;
    double seconds = 0.0;
    int dim = 0;
    std::string note;
};

struct PipelineReport {
    std::string graph6;
    int chi = 0;
    int k = 0;
    bool resolved = false;
    std::string resolved_by;     ///< empty when undetermined
    std::vector<PipelineStep> steps;
    std::optional<SdpCertificate> xi_certificate;
    std::optional<HierarchyCertificate> hierarchy_certificate;
    double seconds = 0.0;
};

struct PipelineOptions {
    std::uint64_t seed = 1;
    Rational eps = Rational(1, 1000);
    SdpOptions sdp;
    HierarchyOptions hierarchy;
    /// Chromatic number when already known (0: computed).
    int chi = 0;
};

/// Proves chi_qc(g) > chi(g) - 1 by the first successful test among xi_SDP,
/// levels S, S', S''. Throws std::invalid_argument when chi(g) < 3.
PipelineReport quantum_lb_pipeline(const Graph& g, const PipelineOptions& opts = {});

}  // namespace qchrome
