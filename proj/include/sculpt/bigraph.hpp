#ifndef SCULPT_BIGRAPH_HPP
#define SCULPT_BIGRAPH_HPP

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sculpt/engine.hpp"
#include "sculpt/fock.hpp"

namespace sculpt {

/// Internal-state label on an edge. A Fourier color k resolves to the
/// Fourier basis vector |k~>; a Level color s to the computational |s>.
/// For d = 2: BLACK = level 0, DOTTED = level 1, RED = Fourier 0 (|+>),
/// BLUE = Fourier 1 (|->).
struct EdgeColor {
    enum class Kind { Level, Fourier };
    Kind kind = Kind::Level;
    int index = 0;

    static EdgeColor black() { return {Kind::Level, 0}; }
    static EdgeColor dotted() { return {Kind::Level, 1}; }
    static EdgeColor red() { return {Kind::Fourier, 0}; }
    static EdgeColor blue(int d = 2) { return {Kind::Fourier, d - 1}; }
    static EdgeColor level(int s) { return {Kind::Level, s}; }
    static EdgeColor fourier(int k) { return {Kind::Fourier, k}; }

    InternalVector resolve(int d) const {
        if (index < 0 || index >= d) throw std::invalid_argument("EdgeColor: index out of range");
        return kind == Kind::Level ? InternalVector::level(d, index) : fourier_internal(d, index);
    }

    bool is_red() const { return kind == Kind::Fourier && index == 0; }
    bool is_blue(int d) const { return kind == Kind::Fourier && index == d - 1; }

    friend auto operator<=>(const EdgeColor&, const EdgeColor&) = default;
};

struct BigraphEdge {
    int circle = 0;  // 0..N-1 system, N..N+K-1 ancilla
    cplx amplitude = 0.0;
    EdgeColor color;
};

/// An unlabelled vertex with its incident edges. multiplicity > 1 stands
/// for a group of identical dots (the gray circles of the qudit graphs).
struct BigraphDot {
    int multiplicity = 1;
    std::vector<BigraphEdge> edges;
};

/// Labelled circles (N system modes plus K ancillas), unlabelled dots, and
/// weighted colored edges. Each dot translates to one subtraction operator.
struct SculptingBigraph {
    int system_modes = 0;   // N
    int ancilla_modes = 0;  // K
    int internal_dim = 2;   // d
    std::vector<BigraphDot> dots;
    std::vector<int> ancilla_levels;  // initial boson level per ancilla; defaults to 0

    int total_circles() const { return system_modes + ancilla_modes; }

    std::vector<int> resolved_ancilla_levels() const {
        if (!ancilla_levels.empty()) return ancilla_levels;
        return std::vector<int>(ancilla_modes, 0);
    }

    void validate() const {
        if (system_modes < 1 || internal_dim < 2)
            throw std::invalid_argument("SculptingBigraph: invalid dimensions");
        for (const auto& dot : dots) {
            if (dot.edges.empty())
                throw std::invalid_argument("SculptingBigraph: dot without edges");
            if (dot.multiplicity < 1)
                throw std::invalid_argument("SculptingBigraph: invalid multiplicity");
            double n2 = 0.0;
            for (const auto& e : dot.edges) {
                if (e.circle < 0 || e.circle >= total_circles())
                    throw std::invalid_argument("SculptingBigraph: circle index out of range");
                n2 += std::norm(e.amplitude);
            }
            if (std::abs(n2 - 1.0) > kCompareTol)
                throw std::invalid_argument("SculptingBigraph: dot amplitudes not normalized");
            for (std::size_t a = 0; a < dot.edges.size(); ++a)
                for (std::size_t b = a + 1; b < dot.edges.size(); ++b)
                    if (dot.edges[a].circle == dot.edges[b].circle &&
                        dot.edges[a].color == dot.edges[b].color)
                        throw std::invalid_argument("SculptingBigraph: duplicate (dot,circle,color)");
        }
    }

    /// Sorts edges within dots and dots by their incidence lists so that
    /// structurally equal graphs compare equal.
    SculptingBigraph canonicalized() const {
        SculptingBigraph g = *this;
        auto edge_key = [](const BigraphEdge& e) {
            return std::tuple(e.circle, e.color, e.amplitude.real(), e.amplitude.imag());
        };
        for (auto& dot : g.dots)
            std::ranges::sort(dot.edges, {}, edge_key);
        std::ranges::sort(g.dots, [&](const BigraphDot& a, const BigraphDot& b) {
            std::vector<std::tuple<int, EdgeColor, double, double>> ka, kb;
            for (const auto& e : a.edges) ka.push_back(edge_key(e));
            for (const auto& e : b.edges) kb.push_back(edge_key(e));
            return std::tuple(ka, a.multiplicity) < std::tuple(kb, b.multiplicity);
        });
        return g;
    }
};

/// Table-driven translation: one subtraction factor per dot, expanded by
/// multiplicity; factor terms mirror the dot's edges.
inline SculptingOperator to_sculpting_operator(const SculptingBigraph& g) {
    g.validate();
    SculptingOperator op;
    op.system_modes = g.system_modes;
    op.ancilla_modes = g.ancilla_modes;
    op.internal_dim = g.internal_dim;
    for (const auto& dot : g.dots) {
        SubtractionOperator factor;
        for (const auto& e : dot.edges)
            factor.terms.push_back({e.circle, e.amplitude, e.color.resolve(g.internal_dim)});
        for (int copy = 0; copy < dot.multiplicity; ++copy) op.factors.push_back(factor);
    }
    return op;
}

inline FockState initial_state_for(const SculptingBigraph& g) {
    return maximally_symmetric_state(g.system_modes, g.internal_dim, g.resolved_ancilla_levels());
}

/// An edge choice per dot covering every circle exactly once.
struct PerfectMatching {
    /// (dot index, edge index) pairs, one per expanded dot.
    std::vector<std::pair<int, int>> picks;
};

namespace detail {

inline void enumerate_pm_rec(const SculptingBigraph& g, const std::vector<int>& dot_of,
                             std::size_t depth, std::vector<int>& circle_used,
                             std::vector<std::pair<int, int>>& picks,
                             std::vector<PerfectMatching>& out) {
    if (depth == dot_of.size()) {
        for (int used : circle_used)
            if (used != 1) return;
        out.push_back({picks});
        return;
    }
    const BigraphDot& dot = g.dots[dot_of[depth]];
    for (std::size_t e = 0; e < dot.edges.size(); ++e) {
        int c = dot.edges[e].circle;
        if (circle_used[c] >= 1) continue;
        ++circle_used[c];
        picks.emplace_back(dot_of[depth], static_cast<int>(e));
        enumerate_pm_rec(g, dot_of, depth + 1, circle_used, picks, out);
        picks.pop_back();
        --circle_used[c];
    }
}

}  // namespace detail

/// Exhaustive, duplicate-free enumeration for qubit-style graphs (each
/// circle covered exactly once). Backtracking over dots with
/// circle-availability pruning. Groups of identical dots contribute one
/// representative ordering, not multiplicity! duplicates.
inline std::vector<PerfectMatching> enumerate_perfect_matchings(const SculptingBigraph& g) {
    std::vector<int> dot_of;  // expanded dot list -> original dot index
    for (std::size_t i = 0; i < g.dots.size(); ++i)
        for (int copy = 0; copy < g.dots[i].multiplicity; ++copy)
            dot_of.push_back(static_cast<int>(i));
    std::vector<int> circle_used(g.total_circles(), 0);
    std::vector<std::pair<int, int>> picks;
    std::vector<PerfectMatching> all;
    detail::enumerate_pm_rec(g, dot_of, 0, circle_used, picks, all);
    // drop orderings that differ only within a multiplicity group
    std::vector<PerfectMatching> unique;
    std::vector<std::vector<std::pair<int, int>>> seen;
    for (auto& pm : all) {
        auto sorted = pm.picks;
        std::ranges::sort(sorted);
        if (std::ranges::find(seen, sorted) == seen.end()) {
            seen.push_back(sorted);
            unique.push_back(std::move(pm));
        }
    }
    return unique;
}

/// Per-circle diagnosis of the effective-PM pattern.
struct EpmReport {
    bool is_epm = true;
    std::vector<std::pair<int, std::string>> offending_circles;
};

/// Syntactic check (d = 2 only): every circle's incident edge multiset must
/// be exactly {one RED, one BLUE}, all BLACK, or all DOTTED. An all-BLACK or
/// all-DOTTED circle may carry any count >= 1.
inline EpmReport is_epm(const SculptingBigraph& g) {
    if (g.internal_dim != 2) throw std::invalid_argument("is_epm: defined for d = 2 only");
    EpmReport report;
    for (int c = 0; c < g.total_circles(); ++c) {
        int red = 0, blue = 0, black = 0, dotted = 0, other = 0;
        for (const auto& dot : g.dots)
            for (const auto& e : dot.edges) {
                if (e.circle != c) continue;
                int count = dot.multiplicity;
                if (e.color.is_red()) red += count;
                else if (e.color.is_blue(2)) blue += count;
                else if (e.color == EdgeColor::black()) black += count;
                else if (e.color == EdgeColor::dotted()) dotted += count;
                else other += count;
            }
        int total = red + blue + black + dotted + other;
        bool ok = (red == 1 && blue == 1 && total == 2) ||
                  (black == total && black >= 1) || (dotted == total && dotted >= 1);
        if (!ok) {
            std::ostringstream diag;
            diag << "red=" << red << " blue=" << blue << " black=" << black
                 << " dotted=" << dotted << " other=" << other;
            report.offending_circles.emplace_back(c, diag.str());
        }
    }
    report.is_epm = report.offending_circles.empty();
    return report;
}

/// Sum over perfect matchings of (product of edge amplitudes) times the PM's
/// annihilations applied to the initial state. For EPM graphs this equals
/// the full sculpting output.
inline FockState pm_sum_state(const SculptingBigraph& g, const FockState& initial) {
    if (!is_epm(g).is_epm) throw std::invalid_argument("pm_sum_state: graph is not EPM");
    FockState acc(initial.spatial_count(), initial.internal_dim());
    for (const auto& pm : enumerate_perfect_matchings(g)) {
        FockState cur = initial;
        cplx coeff = 1.0;
        for (const auto& [dot_idx, edge_idx] : pm.picks) {
            const BigraphEdge& e = g.dots[dot_idx].edges[edge_idx];
            coeff *= e.amplitude;
            cur = apply_annihilation(cur, e.circle, e.color.resolve(g.internal_dim));
        }
        acc = acc.plus(cur.scaled(coeff));
    }
    return acc;
}

/// Relabels system circles by the permutation sigma (sigma[j] is the new
/// label of circle j). Ancilla circles must be fixed.
inline SculptingBigraph permute_circle_labels(const SculptingBigraph& g,
                                              const std::vector<int>& sigma) {
    if (static_cast<int>(sigma.size()) != g.system_modes)
        throw std::invalid_argument("permute_circle_labels: sigma size mismatch");
    std::vector<bool> hit(g.system_modes, false);
    for (int v : sigma) {
        if (v < 0 || v >= g.system_modes)
            throw std::invalid_argument("permute_circle_labels: sigma touches non-system circle");
        hit[v] = true;
    }
    for (bool h : hit)
        if (!h) throw std::invalid_argument("permute_circle_labels: sigma is not a permutation");
    SculptingBigraph out = g;
    for (auto& dot : out.dots)
        for (auto& e : dot.edges)
            if (e.circle < g.system_modes) e.circle = sigma[e.circle];
    return out;
}

namespace detail {

inline std::string dot_edge_attrs(const EdgeColor& color, int d) {
    if (color.is_red()) return "color=red";
    if (color.is_blue(d)) return "color=blue";
    if (color == EdgeColor::black()) return "color=black";
    if (color == EdgeColor::dotted()) return "color=black, style=dashed";
    std::ostringstream os;
    os << "color=black, label=\""
       << (color.kind == EdgeColor::Kind::Fourier ? "f" : "s") << color.index << "\"";
    return os.str();
}

}  // namespace detail

/// Graphviz export. In directed mode the initial-state creations are drawn
/// as extra dots with arrows into the circles and subtraction edges point
/// out of the circles.
inline std::string export_dot(const SculptingBigraph& g, bool directed = false) {
    std::ostringstream os;
    os << (directed ? "digraph" : "graph") << " sculpting {\n";
    os << "  rankdir=LR;\n";
    for (int c = 0; c < g.total_circles(); ++c) {
        os << "  c" << c << " [shape=circle, label=\"";
        if (c < g.system_modes) os << (c + 1);
        else os << static_cast<char>('A' + (c - g.system_modes));
        os << "\"];\n";
    }
    int expanded = 0;
    for (const auto& dot : g.dots) expanded += dot.multiplicity;
    for (int i = 0; i < expanded; ++i)
        os << "  d" << i << " [shape=point];\n";
    const char* arrow = directed ? " -> " : " -- ";
    if (directed) {
        // creation-side dots of the initial state
        int src = 0;
        const auto levels = g.resolved_ancilla_levels();
        for (int c = 0; c < g.total_circles(); ++c) {
            int bosons = c < g.system_modes ? g.internal_dim : 1;
            for (int b = 0; b < bosons; ++b) {
                int level = c < g.system_modes ? b : levels[c - g.system_modes];
                os << "  s" << src << " [shape=point];\n";
                os << "  s" << src << arrow << "c" << c << " [color=black"
                   << (level == 1 ? ", style=dashed" : "") << "];\n";
                ++src;
            }
        }
    }
    int dot_index = 0;
    for (const auto& dot : g.dots) {
        for (int copy = 0; copy < dot.multiplicity; ++copy) {
            for (const auto& e : dot.edges) {
                if (directed)
                    os << "  c" << e.circle << arrow << "d" << dot_index;
                else
                    os << "  c" << e.circle << arrow << "d" << dot_index;
                os << " [" << detail::dot_edge_attrs(e.color, g.internal_dim) << "];\n";
            }
            ++dot_index;
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace sculpt

#endif  // SCULPT_BIGRAPH_HPP
