#ifndef SCULPT_ENGINE_HPP
#define SCULPT_ENGINE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sculpt/fock.hpp"

namespace sculpt {

/// One summand of a single-boson subtraction: amplitude * a_{spatial, internal}.
struct SubtractionTerm {
    int spatial = 0;
    cplx amplitude = 0.0;
    InternalVector internal;
};

/// A spatially superposed single-boson subtraction. The term amplitudes
/// satisfy sum |alpha_j|^2 = 1.
struct SubtractionOperator {
    std::vector<SubtractionTerm> terms;

    void validate() const {
        if (terms.empty())
            throw std::invalid_argument("SubtractionOperator: no terms");
        double n2 = 0.0;
        for (const auto& t : terms) n2 += std::norm(t.amplitude);
        if (std::abs(n2 - 1.0) > kCompareTol)
            throw std::invalid_argument("SubtractionOperator: amplitudes not normalized");
    }
};

/// Ordered product of subtraction operators. The factors commute, so the
/// order is only a serialization convention.
struct SculptingOperator {
    std::vector<SubtractionOperator> factors;
    int system_modes = 0;   // N
    int ancilla_modes = 0;  // K
    int internal_dim = 2;   // d

    int total_modes() const { return system_modes + ancilla_modes; }

    void validate() const {
        if (system_modes < 1 || internal_dim < 2)
            throw std::invalid_argument("SculptingOperator: invalid dimensions");
        for (const auto& f : factors) {
            f.validate();
            for (const auto& t : f.terms) {
                if (t.spatial < 0 || t.spatial >= total_modes())
                    throw std::invalid_argument("SculptingOperator: spatial index out of range");
                if (t.internal.dim() != internal_dim)
                    throw std::invalid_argument("SculptingOperator: internal dim mismatch");
            }
        }
    }
};

/// The maximally symmetric initial state: each of the N system modes holds
/// d bosons in internal levels 0..d-1; each ancilla holds exactly one boson
/// in the level given by ancilla_levels.
inline FockState maximally_symmetric_state(int system_modes, int internal_dim,
                                           const std::vector<int>& ancilla_levels = {}) {
    if (system_modes < 1 || internal_dim < 2)
        throw std::invalid_argument("maximally_symmetric_state: invalid dimensions");
    int total = system_modes + static_cast<int>(ancilla_levels.size());
    FockState s = vacuum(total, internal_dim);
    for (int j = 0; j < system_modes; ++j)
        for (int level = 0; level < internal_dim; ++level)
            s = apply_creation(s, j, InternalVector::level(internal_dim, level));
    for (std::size_t k = 0; k < ancilla_levels.size(); ++k)
        s = apply_creation(s, system_modes + static_cast<int>(k),
                           InternalVector::level(internal_dim, ancilla_levels[k]));
    return s;
}

inline FockState apply_subtraction(const SubtractionOperator& op, const FockState& state) {
    FockState out(state.spatial_count(), state.internal_dim());
    for (const auto& t : op.terms)
        out = out.plus(apply_annihilation(state, t.spatial, t.internal).scaled(t.amplitude));
    return out;
}

/// Sequential application of all factors; returns the (possibly zero)
/// unnormalized final state.
inline FockState apply_sculpting(const SculptingOperator& op, const FockState& state) {
    if (op.total_modes() != state.spatial_count() || op.internal_dim != state.internal_dim())
        throw std::invalid_argument("apply_sculpting: dimension mismatch");
    FockState cur = state;
    for (const auto& f : op.factors) {
        cur = apply_subtraction(f, cur);
        if (cur.is_zero()) break;
    }
    return cur;
}

/// Result of the no-bunching check: every surviving configuration must have
/// exactly one boson in each of the N system modes and empty ancillas.
struct NoBunchingReport {
    bool pass = true;
    std::vector<std::pair<OccupationConfig, cplx>> violations;
};

/// Thrown when an operation requires a heralded (no-bunching) state but the
/// input still carries bunched terms; the offending configurations ride along.
struct NoBunchingError : std::runtime_error {
    NoBunchingReport report;
    NoBunchingError(const std::string& what, NoBunchingReport r)
        : std::runtime_error(what), report(std::move(r)) {}
};

inline NoBunchingReport check_no_bunching(const FockState& state, int system_modes,
                                          int ancilla_modes) {
    NoBunchingReport report;
    for (const auto& [config, amp] : state.terms()) {
        bool ok = true;
        for (int j = 0; j < system_modes && ok; ++j)
            if (config.spatial_count(j) != 1) ok = false;
        for (int k = 0; k < ancilla_modes && ok; ++k)
            if (config.spatial_count(system_modes + k) != 0) ok = false;
        if (!ok) report.violations.emplace_back(config, amp);
    }
    report.pass = report.violations.empty();
    return report;
}

/// Squared norm of the heralded (unnormalized) final state.
inline double success_probability(const FockState& final_state) {
    return final_state.norm_squared();
}

/// One term of the expanded sculpting operator: factor l applies its
/// term_choice[l]-th subtraction term.
struct CollectivePath {
    std::vector<int> term_choice;
    cplx coefficient = 1.0;
};

inline FockState apply_path(const SculptingOperator& op, const CollectivePath& path,
                            const FockState& state) {
    FockState cur = state;
    for (std::size_t l = 0; l < op.factors.size(); ++l) {
        const SubtractionTerm& t = op.factors[l].terms[path.term_choice[l]];
        cur = apply_annihilation(cur, t.spatial, t.internal);
        if (cur.is_zero()) break;
    }
    return cur.scaled(path.coefficient);
}

/// Full binomial-style expansion of the operator into collective paths.
/// The sum of all path operators equals the operator itself.
inline std::vector<CollectivePath> expand_collective_paths(const SculptingOperator& op,
                                                           std::uint64_t path_cap = 10'000'000) {
    std::uint64_t count = 1;
    for (const auto& f : op.factors) {
        count *= f.terms.size();
        if (count > path_cap)
            throw std::runtime_error("expand_collective_paths: path count exceeds cap");
    }
    std::vector<CollectivePath> paths;
    paths.reserve(count);
    CollectivePath cur;
    cur.term_choice.assign(op.factors.size(), 0);
    for (std::uint64_t i = 0; i < count; ++i) {
        cur.coefficient = 1.0;
        for (std::size_t l = 0; l < op.factors.size(); ++l)
            cur.coefficient *= op.factors[l].terms[cur.term_choice[l]].amplitude;
        paths.push_back(cur);
        // odometer increment
        for (std::size_t l = 0; l < op.factors.size(); ++l) {
            if (++cur.term_choice[l] < static_cast<int>(op.factors[l].terms.size())) break;
            cur.term_choice[l] = 0;
        }
    }
    return paths;
}

}  // namespace sculpt

#endif  // SCULPT_ENGINE_HPP
