#ifndef SCULPT_SCHEMES_HPP
#define SCULPT_SCHEMES_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sculpt/bigraph.hpp"
#include "sculpt/engine.hpp"
#include "sculpt/entangle.hpp"
#include "sculpt/fock.hpp"

namespace sculpt {

/// A catalog record: the generating graph (or bare operator), the closed-form
/// expected output, and the logical basis in which it is read.
struct SchemeDescriptor {
    std::string name;
    int system_modes = 0;
    int internal_dim = 2;
    std::optional<SculptingBigraph> graph;  // absent for operator-only schemes
    SculptingOperator op;
    std::vector<int> ancilla_levels;
    std::vector<InternalVector> logical_basis;
    LogicalState expected_state;
    double expected_success = 0.0;
};

/// Ring graph behind the qubit and qudit GHZ schemes: dot j carries
/// RED +1/sqrt2 to circle j and BLUE -1/sqrt2 to circle j+1 (mod N), with
/// dot multiplicity d-1 for qudits.
inline SculptingBigraph ghz_ring_graph(int parties, int d = 2) {
    if (parties < 2) throw std::invalid_argument("ghz_ring_graph: need N >= 2");
    SculptingBigraph g;
    g.system_modes = parties;
    g.internal_dim = d;
    double w = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < parties; ++j) {
        BigraphDot dot;
        dot.multiplicity = d - 1;
        dot.edges.push_back({j, w, EdgeColor::red()});
        dot.edges.push_back({(j + 1) % parties, -w, EdgeColor::blue(d)});
        g.dots.push_back(std::move(dot));
    }
    return g;
}

inline SchemeDescriptor ghz_scheme(int parties) {
    SchemeDescriptor desc;
    desc.name = "ghz";
    desc.system_modes = parties;
    desc.internal_dim = 2;
    desc.graph = ghz_ring_graph(parties, 2);
    desc.op = to_sculpting_operator(*desc.graph);
    desc.logical_basis = plus_minus_basis();
    desc.expected_state = ghz_target(parties, 2);
    desc.expected_success = std::pow(2.0, -(parties - 1));
    return desc;
}

inline SchemeDescriptor bell_scheme() {
    SchemeDescriptor desc = ghz_scheme(2);
    desc.name = "bell";
    return desc;
}

inline SchemeDescriptor qudit_ghz_scheme(int parties, int d) {
    if (parties < 2 || d < 2) throw std::invalid_argument("qudit_ghz_scheme: need N >= 2, d >= 2");
    SchemeDescriptor desc;
    desc.name = "qudit-ghz";
    desc.system_modes = parties;
    desc.internal_dim = d;
    desc.graph = ghz_ring_graph(parties, d);
    desc.op = to_sculpting_operator(*desc.graph);
    desc.logical_basis = fourier_basis(d);
    desc.expected_state = ghz_target(parties, d);
    // closed-form normalization: d * ((d-1)! / (sqrt2^(d-1) sqrt(d)^(d-2)))^(2N)
    double factorial = 1.0;
    for (int k = 2; k < d; ++k) factorial *= k;
    double per_mode = factorial /
                      (std::pow(std::sqrt(2.0), d - 1) * std::pow(std::sqrt(double(d)), d - 2));
    desc.expected_success = d * std::pow(per_mode, 2 * parties);
    return desc;
}

/// W scheme with one ancilla: N dots carrying RED alpha to their circle and
/// BLACK beta to the ancilla, plus one dot with BLUE 1/sqrtN to every system
/// circle. Defaults to the success-maximizing weights.
inline SchemeDescriptor w_scheme(int parties, std::optional<double> alpha_opt = {},
                                 std::optional<double> beta_opt = {}) {
    if (parties < 2) throw std::invalid_argument("w_scheme: need N >= 2");
    double alpha = alpha_opt.value_or(std::sqrt(double(parties - 1) / parties));
    double beta = beta_opt.value_or(std::sqrt(1.0 / parties));
    if (std::abs(alpha * alpha + beta * beta - 1.0) > kCompareTol)
        throw std::invalid_argument("w_scheme: |alpha|^2 + |beta|^2 must be 1");
    SchemeDescriptor desc;
    desc.name = "w";
    desc.system_modes = parties;
    desc.internal_dim = 2;
    SculptingBigraph g;
    g.system_modes = parties;
    g.ancilla_modes = 1;
    g.internal_dim = 2;
    const int ancilla = parties;
    for (int j = 0; j < parties; ++j) {
        BigraphDot dot;
        dot.edges.push_back({j, alpha, EdgeColor::red()});
        dot.edges.push_back({ancilla, beta, EdgeColor::black()});
        g.dots.push_back(std::move(dot));
    }
    BigraphDot blue_dot;
    for (int j = 0; j < parties; ++j)
        blue_dot.edges.push_back({j, 1.0 / std::sqrt(double(parties)), EdgeColor::blue(2)});
    g.dots.push_back(std::move(blue_dot));
    desc.graph = std::move(g);
    desc.op = to_sculpting_operator(*desc.graph);
    desc.ancilla_levels = {0};
    desc.logical_basis = plus_minus_basis();
    desc.expected_state = w_target(parties);
    desc.expected_success = std::pow(alpha, 2 * (parties - 1)) * beta * beta;
    return desc;
}

/// Fixed N = 3 scheme with three ancillas generating the five-term
/// superposition of the tripartite GHZ and W states.
inline SchemeDescriptor type5_scheme() {
    SchemeDescriptor desc;
    desc.name = "type5";
    desc.system_modes = 3;
    desc.internal_dim = 2;
    SculptingBigraph g;
    g.system_modes = 3;
    g.ancilla_modes = 3;
    g.internal_dim = 2;
    const int A = 3, B = 4, C = 5;
    const double r2 = 1.0 / std::sqrt(2.0), r3 = 1.0 / std::sqrt(3.0);
    g.dots.push_back({1, {{0, r2, EdgeColor::red()}, {A, r2, EdgeColor::black()}}});
    g.dots.push_back({1, {{1, r2, EdgeColor::red()}, {B, r2, EdgeColor::black()}}});
    g.dots.push_back({1, {{2, r2, EdgeColor::red()}, {C, r2, EdgeColor::black()}}});
    g.dots.push_back({1, {{C, r2, EdgeColor::black()}, {0, -r2, EdgeColor::blue(2)}}});
    g.dots.push_back({1,
                      {{A, r3, EdgeColor::black()},
                       {B, r3, EdgeColor::black()},
                       {1, -r3, EdgeColor::blue(2)}}});
    g.dots.push_back({1,
                      {{B, r3, EdgeColor::black()},
                       {C, r3, EdgeColor::black()},
                       {2, -r3, EdgeColor::blue(2)}}});
    desc.graph = std::move(g);
    desc.op = to_sculpting_operator(*desc.graph);
    desc.ancilla_levels = {0, 0, 0};
    desc.logical_basis = plus_minus_basis();
    desc.expected_state = type5_target();
    desc.expected_success = 5.0 / 144.0;  // five terms of amplitude 1/12
    return desc;
}

/// The earlier dense GHZ operator: N factors, each superposing all N spatial
/// modes with internal states (|0> + exp(2 pi i (j-l)/N) |1>)/sqrt2. Kept for
/// comparison; the per-factor weights are normalized to 1/sqrtN.
inline SculptingOperator ghz_original_operator(int parties) {
    if (parties < 2) throw std::invalid_argument("ghz_original_operator: need N >= 2");
    SculptingOperator op;
    op.system_modes = parties;
    op.internal_dim = 2;
    double w = 1.0 / std::sqrt(double(parties));
    for (int l = 0; l < parties; ++l) {
        SubtractionOperator factor;
        for (int j = 0; j < parties; ++j) {
            double phase = 2.0 * std::numbers::pi * (j - l) / parties;
            std::vector<cplx> comps = {1.0 / std::sqrt(2.0),
                                       cplx(std::cos(phase), std::sin(phase)) / std::sqrt(2.0)};
            factor.terms.push_back({j, w, InternalVector(std::move(comps))});
        }
        op.factors.push_back(std::move(factor));
    }
    return op;
}

struct SchemeReport {
    FockState final_state;
    double success = 0.0;
    double fidelity = 0.0;
    EntanglementClass classification;
};

/// Executes a descriptor end to end: sculpt, check no-bunching, extract the
/// logical state, and compare against the expected output up to global phase.
inline SchemeReport run_scheme(const SchemeDescriptor& desc) {
    FockState initial =
        maximally_symmetric_state(desc.system_modes, desc.internal_dim, desc.ancilla_levels);
    FockState final_state = apply_sculpting(desc.op, initial);
    NoBunchingReport nb =
        check_no_bunching(final_state, desc.system_modes, static_cast<int>(desc.ancilla_levels.size()));
    if (!nb.pass)
        throw NoBunchingError("run_scheme: no-bunching violation in scheme " + desc.name,
                              std::move(nb));
    auto [logical, success] =
        to_logical_state(final_state, desc.system_modes, desc.internal_dim, desc.logical_basis);
    SchemeReport report{std::move(final_state), success, 0.0, classify(logical)};
    report.fidelity = fidelity_up_to_phase(logical, desc.expected_state);
    return report;
}

inline std::vector<std::string> scheme_names() {
    return {"bell", "ghz", "w", "type5", "qudit-ghz"};
}

/// Builds a descriptor by name with the given parameters.
inline SchemeDescriptor make_scheme(const std::string& name, int parties, int d,
                                    std::optional<double> alpha = {},
                                    std::optional<double> beta = {}) {
    if (name == "bell") return bell_scheme();
    if (name == "ghz") return ghz_scheme(parties);
    if (name == "w") return w_scheme(parties, alpha, beta);
    if (name == "type5") return type5_scheme();
    if (name == "qudit-ghz") return qudit_ghz_scheme(parties, d);
    throw std::invalid_argument("unknown scheme: " + name);
}

}  // namespace sculpt

#endif  // SCULPT_SCHEMES_HPP
