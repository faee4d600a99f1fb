#ifndef SCULPT_ENTANGLE_HPP
#define SCULPT_ENTANGLE_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sculpt/engine.hpp"
#include "sculpt/fock.hpp"

namespace sculpt {

/// Dense N-party, d-level state vector in row-major party order (party 0 is
/// the most significant digit).
struct LogicalState {
    int parties = 0;   // N
    int local_dim = 2; // d
    std::vector<cplx> amps;

    std::size_t dim() const { return amps.size(); }

    static LogicalState from_amps(int parties, int local_dim, std::vector<cplx> amps,
                                  bool normalize = false) {
        LogicalState s{parties, local_dim, std::move(amps)};
        std::size_t expect = 1;
        for (int p = 0; p < parties; ++p) expect *= local_dim;
        if (s.amps.size() != expect)
            throw std::invalid_argument("LogicalState: amplitude count mismatch");
        double n2 = 0.0;
        for (const auto& a : s.amps) n2 += std::norm(a);
        if (normalize) {
            if (n2 == 0.0) throw std::invalid_argument("LogicalState: zero vector");
            double inv = 1.0 / std::sqrt(n2);
            for (auto& a : s.amps) a *= inv;
        } else if (std::abs(n2 - 1.0) > kCompareTol) {
            throw std::invalid_argument("LogicalState: not unit norm");
        }
        return s;
    }
};

/// |<a|b>|, invariant under global phases of either argument.
inline double fidelity_up_to_phase(const LogicalState& a, const LogicalState& b) {
    if (a.parties != b.parties || a.local_dim != b.local_dim)
        throw std::invalid_argument("fidelity_up_to_phase: dimension mismatch");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.amps.size(); ++i) acc += std::conj(a.amps[i]) * b.amps[i];
    return std::abs(acc);
}

enum class SeparabilityClass { FullySeparable, PartiallySeparable, Genuine };

inline std::string to_string(SeparabilityClass c) {
    switch (c) {
        case SeparabilityClass::FullySeparable: return "FULLY_SEPARABLE";
        case SeparabilityClass::PartiallySeparable: return "PARTIALLY_SEPARABLE";
        case SeparabilityClass::Genuine: return "GENUINE";
    }
    return "?";
}

/// Classification with the rank-1 bipartitions as witnesses (bitmask over
/// parties; witnesses are present unless the state is genuinely entangled).
struct EntanglementClass {
    SeparabilityClass cls = SeparabilityClass::Genuine;
    std::vector<unsigned> witness_bipartitions;
};

/// Schmidt rank across the bipartition given by mask (bit p set = party p on
/// the row side): singular values above the threshold.
inline int schmidt_rank(const LogicalState& s, unsigned mask, double sv_threshold = 1e-8) {
    int rows_parties = 0;
    for (int p = 0; p < s.parties; ++p)
        if (mask & (1u << p)) ++rows_parties;
    std::size_t rows = 1, cols = 1;
    for (int p = 0; p < rows_parties; ++p) rows *= s.local_dim;
    for (int p = 0; p < s.parties - rows_parties; ++p) cols *= s.local_dim;
    Eigen::MatrixXcd m(rows, cols);
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
        // split the base-d digits of i by mask
        std::size_t r = 0, c = 0;
        std::size_t rest = i;
        std::vector<int> digits(s.parties);
        for (int p = s.parties - 1; p >= 0; --p) {
            digits[p] = static_cast<int>(rest % s.local_dim);
            rest /= s.local_dim;
        }
        for (int p = 0; p < s.parties; ++p) {
            if (mask & (1u << p)) r = r * s.local_dim + digits[p];
            else c = c * s.local_dim + digits[p];
        }
        m(r, c) = s.amps[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    int rank = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()(k) > sv_threshold) ++rank;
    return rank;
}

/// Three-class separability test over all 2^(N-1)-1 bipartitions.
inline EntanglementClass classify(const LogicalState& s, double sv_threshold = 1e-8) {
    if (s.parties < 2) throw std::invalid_argument("classify: need at least 2 parties");
    EntanglementClass out;
    bool any_rank1 = false, all_rank1 = true;
    unsigned full = (1u << s.parties) - 1;
    for (unsigned mask = 1; mask < full; ++mask) {
        if (!(mask & 1u)) continue;  // fix party 0 on the row side
        int rank = schmidt_rank(s, mask, sv_threshold);
        if (rank <= 1) {
            any_rank1 = true;
            out.witness_bipartitions.push_back(mask);
        } else {
            all_rank1 = false;
        }
    }
    if (!any_rank1) out.cls = SeparabilityClass::Genuine;
    else if (all_rank1) out.cls = SeparabilityClass::FullySeparable;
    else out.cls = SeparabilityClass::PartiallySeparable;
    return out;
}

/// Extraction of the N-party logical state from a no-bunching Fock state:
/// the amplitude of |s_1 .. s_N> is the overlap with the product state that
/// has one boson of local_basis[s_j] in system mode j and empty ancillas.
/// Returns the pre-normalization squared norm alongside.
struct LogicalExtraction {
    LogicalState state;
    double success = 0.0;
};

inline LogicalExtraction to_logical_state(const FockState& f, int parties, int local_dim,
                                          const std::vector<InternalVector>& local_basis) {
    if (static_cast<int>(local_basis.size()) != local_dim)
        throw std::invalid_argument("to_logical_state: basis size must equal local dim");
    int ancillas = f.spatial_count() - parties;
    NoBunchingReport nb = check_no_bunching(f, parties, ancillas);
    if (!nb.pass)
        throw std::invalid_argument("to_logical_state: state violates no-bunching");
    std::size_t dim = 1;
    for (int p = 0; p < parties; ++p) dim *= local_dim;
    std::vector<cplx> amps(dim, 0.0);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        FockState basis_state = vacuum(f.spatial_count(), f.internal_dim());
        std::size_t rest = idx;
        std::vector<int> word(parties);
        for (int p = parties - 1; p >= 0; --p) {
            word[p] = static_cast<int>(rest % local_dim);
            rest /= local_dim;
        }
        for (int p = 0; p < parties; ++p)
            basis_state = apply_creation(basis_state, p, local_basis[word[p]]);
        amps[idx] = inner_product(basis_state, f);
    }
    double n2 = 0.0;
    for (const auto& a : amps) n2 += std::norm(a);
    if (n2 == 0.0) throw std::invalid_argument("to_logical_state: zero logical projection");
    double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amps) a *= inv;
    return {LogicalState{parties, local_dim, std::move(amps)}, n2};
}

/// The {|+>, |->} logical basis used by the qubit schemes (|+> encodes 0).
inline std::vector<InternalVector> plus_minus_basis() {
    return {fourier_internal(2, 0), fourier_internal(2, 1)};
}

/// The Fourier logical basis |k~> used by the qudit schemes.
inline std::vector<InternalVector> fourier_basis(int d) {
    std::vector<InternalVector> basis;
    for (int k = 0; k < d; ++k) basis.push_back(fourier_internal(d, k));
    return basis;
}

inline LogicalState ghz_target(int parties, int local_dim) {
    std::size_t dim = 1;
    for (int p = 0; p < parties; ++p) dim *= local_dim;
    std::vector<cplx> amps(dim, 0.0);
    double w = 1.0 / std::sqrt(double(local_dim));
    for (int k = 0; k < local_dim; ++k) {
        std::size_t idx = 0;
        for (int p = 0; p < parties; ++p) idx = idx * local_dim + k;
        amps[idx] = w;
    }
    return LogicalState{parties, local_dim, std::move(amps)};
}

inline LogicalState w_target(int parties) {
    std::size_t dim = std::size_t(1) << parties;
    std::vector<cplx> amps(dim, 0.0);
    double w = 1.0 / std::sqrt(double(parties));
    for (int p = 0; p < parties; ++p) amps[std::size_t(1) << (parties - 1 - p)] = w;
    return LogicalState{parties, 2, std::move(amps)};
}

/// The five-term superposition of the tripartite GHZ and W states:
/// (|000> + |100> + |101> + |110> + |111>)/sqrt(5) with |+> encoding 0.
inline LogicalState type5_target() {
    std::vector<cplx> amps(8, 0.0);
    double w = 1.0 / std::sqrt(5.0);
    for (std::size_t idx : {0b000u, 0b100u, 0b101u, 0b110u, 0b111u}) amps[idx] = w;
    return LogicalState{3, 2, std::move(amps)};
}

}  // namespace sculpt

#endif  // SCULPT_ENTANGLE_HPP
