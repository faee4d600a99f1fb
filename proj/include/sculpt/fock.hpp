#ifndef SCULPT_FOCK_HPP
#define SCULPT_FOCK_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sculpt {

using cplx = std::complex<double>;

inline constexpr double kPruneThreshold = 1e-12;
inline constexpr double kCompareTol = 1e-9;

/// One bosonic mode: spatial index plus internal level.
struct ModeKey {
    int spatial = 0;
    int internal = 0;

    friend auto operator<=>(const ModeKey&, const ModeKey&) = default;
};

/// Occupation numbers for a set of modes, sorted by (spatial, internal).
/// Zero counts are never stored, so equal configurations compare equal
/// bit-for-bit.
class OccupationConfig {
public:
    OccupationConfig() = default;

    const std::vector<std::pair<ModeKey, int>>& entries() const { return entries_; }

    int count(ModeKey m) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), m, key_less);
        if (it != entries_.end() && it->first == m) return it->second;
        return 0;
    }

    int total_bosons() const {
        int t = 0;
        for (const auto& [m, n] : entries_) t += n;
        return t;
    }

    /// Occupation summed over internal levels of one spatial mode.
    int spatial_count(int spatial) const {
        int t = 0;
        for (const auto& [m, n] : entries_)
            if (m.spatial == spatial) t += n;
        return t;
    }

    /// Returns the config with one more boson in mode m, and the occupation
    /// n after the addition (so the bosonic factor is sqrt(n)).
    std::pair<OccupationConfig, int> with_added(ModeKey m) const {
        OccupationConfig out = *this;
        auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), m, key_less);
        if (it != out.entries_.end() && it->first == m) {
            ++it->second;
            return {std::move(out), it->second};
        }
        out.entries_.insert(it, {m, 1});
        return {std::move(out), 1};
    }

    /// Returns the config with one boson removed from mode m and the
    /// occupation n before removal, or n = 0 if the mode is empty.
    std::pair<OccupationConfig, int> with_removed(ModeKey m) const {
        OccupationConfig out = *this;
        auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), m, key_less);
        if (it == out.entries_.end() || !(it->first == m)) return {std::move(out), 0};
        int n = it->second;
        if (--it->second == 0) out.entries_.erase(it);
        return {std::move(out), n};
    }

    friend auto operator<=>(const OccupationConfig&, const OccupationConfig&) = default;

private:
    static bool key_less(const std::pair<ModeKey, int>& a, const ModeKey& b) {
        return a.first < b;
    }

    std::vector<std::pair<ModeKey, int>> entries_;
};

/// A normalized d-level internal state.
class InternalVector {
public:
    InternalVector() = default;

    explicit InternalVector(std::vector<cplx> components, bool require_unit = true)
        : components_(std::move(components)) {
        if (components_.empty())
            throw std::invalid_argument("InternalVector: empty component list");
        if (require_unit) {
            double n2 = 0.0;
            for (const auto& c : components_) n2 += std::norm(c);
            if (std::abs(std::sqrt(n2) - 1.0) > kCompareTol)
                throw std::invalid_argument("InternalVector: not unit norm");
        }
    }

    /// Computational basis vector |s> in dimension d.
    static InternalVector level(int d, int s) {
        if (s < 0 || s >= d) throw std::invalid_argument("InternalVector::level: s out of range");
        std::vector<cplx> c(d, 0.0);
        c[s] = 1.0;
        return InternalVector(std::move(c));
    }

    int dim() const { return static_cast<int>(components_.size()); }
    const cplx& operator[](int s) const { return components_[s]; }
    const std::vector<cplx>& components() const { return components_; }

private:
    std::vector<cplx> components_;
};

/// Fourier-basis internal vector: component s equals exp(2*pi*i*k*s/d)/sqrt(d).
inline InternalVector fourier_internal(int d, int k) {
    if (d < 2) throw std::invalid_argument("fourier_internal: d must be >= 2");
    if (k < 0 || k >= d) throw std::invalid_argument("fourier_internal: k out of range");
    std::vector<cplx> c(d);
    for (int s = 0; s < d; ++s) {
        double phase = 2.0 * std::numbers::pi * k * s / d;
        c[s] = cplx(std::cos(phase), std::sin(phase)) / std::sqrt(double(d));
    }
    return InternalVector(std::move(c));
}

/// Sparse linear combination of occupation configurations with complex
/// amplitudes. The zero state (no terms) is a valid value. All operations
/// return new states; existing states are never mutated.
class FockState {
public:
    using TermMap = std::map<OccupationConfig, cplx>;

    FockState() = default;
    FockState(int spatial_count, int internal_dim)
        : spatial_count_(spatial_count), internal_dim_(internal_dim) {
        if (spatial_count < 1 || internal_dim < 2)
            throw std::invalid_argument("FockState: invalid dimensions");
    }

    static FockState vacuum(int spatial_count, int internal_dim) {
        FockState s(spatial_count, internal_dim);
        s.terms_[OccupationConfig{}] = 1.0;
        return s;
    }

    int spatial_count() const { return spatial_count_; }
    int internal_dim() const { return internal_dim_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    cplx amplitude(const OccupationConfig& c) const {
        auto it = terms_.find(c);
        return it == terms_.end() ? cplx(0.0) : it->second;
    }

    void add_term(const OccupationConfig& c, cplx a) {
        auto [it, inserted] = terms_.try_emplace(c, a);
        if (!inserted) it->second += a;
    }

    /// Drops terms with |amplitude| below the prune threshold.
    FockState pruned(double threshold = kPruneThreshold) const {
        FockState out(spatial_count_, internal_dim_);
        for (const auto& [c, a] : terms_)
            if (std::abs(a) >= threshold) out.terms_[c] = a;
        return out;
    }

    FockState scaled(cplx factor) const {
        FockState out(spatial_count_, internal_dim_);
        for (const auto& [c, a] : terms_) out.terms_[c] = a * factor;
        return out.pruned();
    }

    FockState plus(const FockState& other) const {
        require_same_dims(other);
        FockState out = *this;
        for (const auto& [c, a] : other.terms_) out.add_term(c, a);
        return out.pruned();
    }

    FockState minus(const FockState& other) const { return plus(other.scaled(-1.0)); }

    double norm_squared() const {
        double n2 = 0.0;
        for (const auto& [c, a] : terms_) n2 += std::norm(a);
        return n2;
    }

    void require_same_dims(const FockState& other) const {
        if (spatial_count_ != other.spatial_count_ || internal_dim_ != other.internal_dim_)
            throw std::invalid_argument("FockState: dimension mismatch");
    }

private:
    int spatial_count_ = 1;
    int internal_dim_ = 2;
    TermMap terms_;
};

inline FockState vacuum(int spatial_count, int internal_dim) {
    return FockState::vacuum(spatial_count, internal_dim);
}

/// Conjugate-linear in the first argument.
inline cplx inner_product(const FockState& a, const FockState& b) {
    a.require_same_dims(b);
    // iterate over the smaller term set
    const FockState& small = a.terms().size() <= b.terms().size() ? a : b;
    const FockState& large = a.terms().size() <= b.terms().size() ? b : a;
    cplx acc = 0.0;
    for (const auto& [c, amp] : small.terms()) {
        cplx other = large.amplitude(c);
        if (&small == &a)
            acc += std::conj(amp) * other;
        else
            acc += std::conj(other) * amp;
    }
    return acc;
}

namespace detail {

inline void check_mode(const FockState& s, int spatial, const InternalVector& v) {
    if (spatial < 0 || spatial >= s.spatial_count())
        throw std::invalid_argument("spatial mode index out of range");
    if (v.dim() != s.internal_dim())
        throw std::invalid_argument("internal vector dimension mismatch");
}

}  // namespace detail

/// Adds one boson in internal state v at the given spatial mode:
/// a^dag_{j,v} = sum_s <s|v> a^dag_{j,s}, with the bosonic sqrt(n+1) factor.
inline FockState apply_creation(const FockState& state, int spatial, const InternalVector& v) {
    detail::check_mode(state, spatial, v);
    FockState out(state.spatial_count(), state.internal_dim());
    for (const auto& [config, amp] : state.terms()) {
        for (int s = 0; s < v.dim(); ++s) {
            if (v[s] == cplx(0.0)) continue;
            auto [next, n] = config.with_added({spatial, s});
            out.add_term(next, amp * v[s] * std::sqrt(double(n)));
        }
    }
    return out.pruned();
}

/// Adds one boson in the superposition sum_k c_k a^dag_{m_k} over arbitrary
/// (spatial, internal) modes. Used by the optics elements.
inline FockState apply_creation_combo(const FockState& state,
                                      const std::vector<std::pair<ModeKey, cplx>>& combo) {
    FockState out(state.spatial_count(), state.internal_dim());
    for (const auto& [config, amp] : state.terms()) {
        for (const auto& [mode, coeff] : combo) {
            if (coeff == cplx(0.0)) continue;
            auto [next, n] = config.with_added(mode);
            out.add_term(next, amp * coeff * std::sqrt(double(n)));
        }
    }
    return out.pruned();
}

/// Removes one boson in internal state v: a_{j,v} = sum_s conj(<s|v>) a_{j,s},
/// so that apply_annihilation is the adjoint of apply_creation. Terms where
/// the mode is empty vanish; the zero state is a valid result.
inline FockState apply_annihilation(const FockState& state, int spatial, const InternalVector& v) {
    detail::check_mode(state, spatial, v);
    FockState out(state.spatial_count(), state.internal_dim());
    for (const auto& [config, amp] : state.terms()) {
        for (int s = 0; s < v.dim(); ++s) {
            if (v[s] == cplx(0.0)) continue;
            auto [next, n] = config.with_removed({spatial, s});
            if (n == 0) continue;
            out.add_term(next, amp * std::conj(v[s]) * std::sqrt(double(n)));
        }
    }
    return out.pruned();
}

}  // namespace sculpt

#endif  // SCULPT_FOCK_HPP
