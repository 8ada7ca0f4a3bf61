#pragma once

#include "toric/cyclo.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace toric {

struct InvalidSeed : std::domain_error {
    InvalidSeed() : std::domain_error("teichmuller seed is not a unit") {}
};
struct PrecisionError : std::domain_error {
    explicit PrecisionError(const std::string& what) : std::domain_error(what) {}
};
struct NonUnit : std::domain_error {
    NonUnit() : std::domain_error("element is not a unit") {}
};

enum class RingMode { UnramifiedMixed, EqualChar };

// Root of unity zeta_order^exp in reduced form; the fast value type for
// characters and additive-character evaluations.
struct RootOfUnity {
    long order = 1;
    long exp = 0;

    static RootOfUnity one() { return {1, 0}; }
    static RootOfUnity make(long order, long exp);
    RootOfUnity mul(const RootOfUnity& o) const;
    RootOfUnity inv() const { return make(order, -exp); }
    RootOfUnity conj() const { return inv(); }
    RootOfUnity pow(long e) const { return make(order, exp * e); }
    bool is_one() const { return exp == 0; }
    bool operator==(const RootOfUnity& o) const { return order == o.order && exp == o.exp; }
    Cyc to_cyc(const std::shared_ptr<const CycContext>& ctx) const;
};

// The residue field F_{p^d} with log/exp tables for a fixed primitive root.
// Elements are indices packing polynomial coefficients base p (0 is zero).
class FqField {
public:
    FqField(long p, long d);

    long p() const { return p_; }
    long d() const { return d_; }
    long size() const { return size_; } // p^d
    long gen() const { return exp_[1]; }

    long add(long a, long b) const;
    long neg(long a) const;
    long sub(long a, long b) const { return add(a, neg(b)); }
    long mul(long a, long b) const;
    long inv(long a) const;
    long pow_q(long a, long q) const; // a^q via log table
    long exp(long e) const;           // gen^e, e mod (size-1)
    long log(long a) const;           // undefined for a = 0
    long trace_to_fp(long a) const;   // absolute trace into {0..p-1}

    const std::vector<long>& modulus() const { return h_; } // monic, length d+1

private:
    long p_, d_, size_;
    std::vector<long> h_;
    std::vector<long> exp_;
    std::vector<long> log_;
};

class RingElt;

// Truncated unramified local ring: O/P^level for F (width 1) or its quadratic
// unramified extension M (width 2).  UnramifiedMixed realizes the Galois ring
// GR(p^level, f*width); EqualChar realizes F_{p^{f*width}}[t]/(t^level).
class TruncRing : public std::enable_shared_from_this<TruncRing> {
public:
    static std::shared_ptr<const TruncRing> get(RingMode mode, long p, long f, long width, long level);

    RingMode mode() const { return mode_; }
    long p() const { return p_; }
    long f() const { return f_; }
    long q() const { return q_; }
    long width() const { return width_; }
    long level() const { return level_; }
    long deg() const { return d_; } // f*width
    long pj() const { return pj_; } // p^level (mixed mode scale)
    const FqField& residue_field() const { return *fq_; }

    std::shared_ptr<const TruncRing> at_level(long level) const;

    RingElt zero() const;
    RingElt one() const;
    RingElt from_int(long n) const;
    // Unique Teichmuller lift of the residue element (index into residue field);
    // the constant-digit lift in EqualChar mode.
    RingElt teichmuller(long residue_index) const;
    // teichmuller(gen^e); e may be any integer.
    RingElt teich_pow(long e) const;

    std::string describe() const;

    // Raw mixed-mode arithmetic on coefficient vectors (length deg, mod p^level).
    std::vector<int64_t> raw_mul(const std::vector<int64_t>& a, const std::vector<int64_t>& b) const;
    std::vector<int64_t> raw_pow(std::vector<int64_t> base, Int e) const;
    std::vector<int64_t> raw_inv(const std::vector<int64_t>& a) const;
    std::vector<int64_t> raw_eval_frob_p(const std::vector<int64_t>& a) const;
    int64_t h_is_coeff(long i) const;

private:
    TruncRing(RingMode mode, long p, long f, long width, long level);

    RingMode mode_;
    long p_, f_, q_, width_, level_, d_;
    long pj_; // p^level
    std::shared_ptr<const FqField> fq_;
    std::vector<int64_t> h_;                     // monic modulus lift, coefficients mod p^level
    std::vector<std::vector<int64_t>> red_rows_; // x^(d+k) mod h
    std::vector<int64_t> frob_p_;                // image of x under the p-power automorphism
    std::vector<int64_t> teich_gen_;             // Teichmuller lift of the residue generator
    mutable std::vector<std::vector<int64_t>> teich_cache_;
};

// Element of a TruncRing.  Mixed mode: coefficients of x^i modulo p^level.
// EqualChar mode: residue-field indices, entry (i*level + s) = coeff of x^i t^s.
class RingElt {
public:
    RingElt() = default;
    RingElt(std::shared_ptr<const TruncRing> ring, std::vector<int64_t> data)
        : ring_(std::move(ring)), data_(std::move(data)) {}

    const std::shared_ptr<const TruncRing>& ring() const { return ring_; }
    const std::vector<int64_t>& data() const { return data_; }
    long level() const { return ring_->level(); }
    bool is_zero() const;
    bool is_unit() const { return residue() != 0; }

    friend RingElt operator+(const RingElt& a, const RingElt& b);
    friend RingElt operator-(const RingElt& a, const RingElt& b);
    friend RingElt operator*(const RingElt& a, const RingElt& b);
    RingElt operator-() const;
    RingElt inv() const; // throws NonUnit
    RingElt pow(long e) const;
    bool operator==(const RingElt& a) const;

    // q-power automorphism (width 2); squares to the identity.
    RingElt frobenius() const;
    RingElt trace_to_base() const { return *this + frobenius(); }
    RingElt norm_to_base() const { return *this * frobenius(); }
    bool is_base(int slack = 0) const; // fixed by frobenius (mod P^(level-slack))

    long residue() const; // residue-field index of the constant digit
    // P-adic valuation; returns level() for zero.
    long valuation() const;
    // Exact division by the uniformizer (p resp. t) k times; level drops by k.
    RingElt shift_down(long k) const;
    RingElt reduce_to(long level) const;
    // Canonical (digit-preserving) lift to a higher level.
    RingElt lift_to(long level) const;

    // Teichmuller digit expansion, one residue-field index per level.
    std::vector<long> digits() const;
    static RingElt from_digits(const std::shared_ptr<const TruncRing>& ring,
                               const std::vector<long>& digits);

    // Galois-ring trace to Z/p^level (constant term of the sum of p-power
    // conjugates); mixed mode only.
    int64_t absolute_trace() const;

    std::string str() const;

private:
    std::shared_ptr<const TruncRing> ring_;
    std::vector<int64_t> data_;
};

// Additive character of F with conductor 0: trivial on O_F, nontrivial on
// P_F^{-1}.  Evaluates on u * pi_F^{val} for integral u.
class AdditivePsi0 {
public:
    // u must be width-1 or frobenius-fixed width-2 (then the half-trace rule
    // applies); val <= 0; u needs level >= -val.
    static RootOfUnity eval(const RingElt& u, long val);
    static Cyc eval_cyc(const RingElt& u, long val, const std::shared_ptr<const CycContext>& ctx);
};

} // namespace toric
