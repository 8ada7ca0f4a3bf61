#pragma once

#include "toric/localring.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace toric {

struct NoCoset : std::logic_error {
    NoCoset() : std::logic_error("no coset representative matched (family/subgroup mismatch)") {}
};

// Parameters of the truncated quaternion order O_D / P_D^level.  Elements are
// stored at store_level = level + 2 so that one uniformizer division and the
// fractional-ideal pairings never run out of digits.
class QuatParams {
public:
    static std::shared_ptr<const QuatParams> get(RingMode mode, long p, long f, long level);

    RingMode mode() const { return mode_; }
    long p() const { return p_; }
    long f() const { return f_; }
    long q() const { return q_; }
    long level() const { return level_; }
    long store_level() const { return store_level_; }

    // Width-2 coefficient ring at the given P_M-level.
    std::shared_ptr<const TruncRing> mring(long mlevel) const;
    const FqField& fq() const; // residue field F_{q^2}

    long zeta_order() const { return q_ * q_ - 1; }
    // residue index of zeta^e
    long zeta_res(long e) const;
    // is the residue element fixed by x -> x^q (i.e. in F_q)?
    bool res_in_base(long idx) const;
    // digit sets in enumeration order (zero digit last)
    const std::vector<long>& dset() const { return dset_; } // all of F_{q^2}
    const std::vector<long>& fset() const { return fset_; } // F_q inside F_{q^2}

private:
    QuatParams(RingMode mode, long p, long f, long level);
    RingMode mode_;
    long p_, f_, q_, level_, store_level_;
    std::vector<long> dset_, fset_;
};

using ParamsPtr = std::shared_ptr<const QuatParams>;

// Element a + b*w of the truncated order, w^2 = pi_F, w z w^-1 = z^sigma.
// The D-level is a.level + b.level; a is the diagonal component.
class QuatElt {
public:
    QuatElt() = default;
    QuatElt(ParamsPtr params, RingElt a, RingElt b);

    static QuatElt zero(const ParamsPtr& params, long dlevel);
    static QuatElt one(const ParamsPtr& params, long dlevel);
    // Teichmuller unit zeta^e
    static QuatElt zeta_pow(const ParamsPtr& params, long e, long dlevel);
    // the uniformizer w
    static QuatElt w(const ParamsPtr& params, long dlevel);
    static QuatElt from_diag(const ParamsPtr& params, RingElt a, long dlevel);

    const ParamsPtr& params() const { return params_; }
    const RingElt& a() const { return a_; }
    const RingElt& b() const { return b_; }
    long dlevel() const { return dlevel_; }

    bool is_zero() const;
    bool is_unit() const { return a_.is_unit(); }
    long valuation() const; // min(2 v(a), 2 v(b) + 1), capped at dlevel

    friend QuatElt operator+(const QuatElt& x, const QuatElt& y);
    friend QuatElt operator-(const QuatElt& x, const QuatElt& y);
    friend QuatElt operator*(const QuatElt& x, const QuatElt& y);
    QuatElt operator-() const;
    QuatElt inv() const; // throws NonUnit
    QuatElt pow(long e) const;
    bool operator==(const QuatElt& y) const;

    RingElt reduced_trace() const; // a + sigma(a), frobenius-fixed
    RingElt reduced_norm() const;  // a sigma(a) - pi_F b sigma(b)
    QuatElt conj_main() const;     // sigma(a) - b w
    QuatElt conj_by_w() const;     // w x w^-1: componentwise frobenius

    QuatElt mul_w() const;          // x * w, D-level rises by 1
    QuatElt div_w() const;          // x * w^-1, requires valuation >= 1
    QuatElt div_w_pow(long k) const;
    QuatElt reduce_to(long dlevel) const;

    // x * g^-1 for integral g with v(g) <= v(x); D-level drops by v(g).
    QuatElt right_div(const QuatElt& g) const;

    std::string key() const; // serialization for maps (level-aware)
    std::string key_at(long dlevel) const;

private:
    ParamsPtr params_;
    RingElt a_, b_;
    long dlevel_ = 0;
};

// pi^val * unit with unit of valuation 0.
struct FracQuatElt {
    QuatElt unit;
    long val = 0;
};

enum class TorusKind { M, K, L };

// Torus tag: M = F(zeta); K_s = F(zeta^(2s) w); L_s = F(zeta^(2s+1) w).
struct TorusTag {
    TorusKind kind = TorusKind::M;
    long s = 0;

    static TorusTag M() { return {TorusKind::M, 0}; }
    static TorusTag K(long s = 0) { return {TorusKind::K, s}; }
    static TorusTag L(long s = 0) { return {TorusKind::L, s}; }
    bool ramified() const { return kind != TorusKind::M; }
    // zeta-exponent of the generator (ramified kinds)
    long zexp() const { return kind == TorusKind::K ? 2 * s : 2 * s + 1; }
    bool operator==(const TorusTag& o) const { return kind == o.kind && zexp() == o.zexp(); }
    std::string str() const;
    static TorusTag parse(const std::string& text, long s_param);
};

QuatElt torus_gen(const ParamsPtr& params, const TorusTag& tag, long dlevel);

// Canonical form of x modulo F^x (1 + P_E^nu) inside the torus E, or nullopt
// if x does not lie in E^x at the inspected precision.
struct TorusCanon {
    long vbit = 0;           // generator-power parity (ramified); 0 for M
    long lead = 0;           // zeta-exponent in [0, q] (M only)
    std::vector<long> digits; // residue indices, one per level in [1, nu)
    std::string key() const;
};

std::optional<TorusCanon> torus_canon(const ParamsPtr& params, const TorusTag& tag, long nu,
                                      const QuatElt& x);
QuatElt torus_canon_rep(const ParamsPtr& params, const TorusTag& tag, long nu,
                        const TorusCanon& canon, long dlevel);

// Transversal of E^x / F^x (1 + P_E^nu): the image of the torus in the level
// quotient, enumerated in deterministic canonical order.
class TorusQuotient {
public:
    TorusQuotient(ParamsPtr params, TorusTag tag, long nu);

    const TorusTag& tag() const { return tag_; }
    long nu() const { return nu_; }
    long size() const { return static_cast<long>(elements_.size()); }
    const QuatElt& element(long i) const { return elements_[i]; }
    const std::vector<QuatElt>& elements() const { return elements_; }
    long index_of(const QuatElt& x) const; // -1 if not in the torus
    long mul(long i, long j) const;
    long inv(long i) const;
    long identity() const { return id_index_; }
    // indices of the image of the 1-unit layer 1 + P_E^j (j >= 1)
    std::vector<long> layer(long j) const;

private:
    ParamsPtr params_;
    TorusTag tag_;
    long nu_;
    long id_index_ = 0;
    std::vector<QuatElt> elements_;
    std::vector<TorusCanon> canons_;
    std::map<std::string, long> index_;
};

// Subgroup shapes used by the induced constructions.
struct SubgroupDesc {
    enum class Shape { RamH, UnramH, Hpp, Hp, Hp1 } shape;
    TorusTag torus; // RamH only
    long m = 0;     // filtration parameter

    static SubgroupDesc ram_h(TorusTag torus, long m) { return {Shape::RamH, torus, m}; }
    static SubgroupDesc unram_h(long m) { return {Shape::UnramH, TorusTag::M(), m}; }
    static SubgroupDesc hpp(long m) { return {Shape::Hpp, TorusTag::M(), m}; }
    static SubgroupDesc hp(long m) { return {Shape::Hp, TorusTag::M(), m}; }
    static SubgroupDesc hp1(long m) { return {Shape::Hp1, TorusTag::M(), m}; }
};

// Witness x = torus_part * (1 + w): torus_part in E^x (resp. M^x, F^x(1+P_M)),
// one_unit in the stated one-unit radical.
struct SubgroupWitness {
    QuatElt torus_part;
    QuatElt one_unit;
};

std::optional<SubgroupWitness> subgroup_decompose(const ParamsPtr& params, const SubgroupDesc& H,
                                                  const QuatElt& x);
bool subgroup_member(const ParamsPtr& params, const SubgroupDesc& H, const QuatElt& x);

// psi_D(c x) = psi_0(Trd(c x)).
RootOfUnity psi_D(const FracQuatElt& c, const QuatElt& x);
RootOfUnity psi_E_frac(const RingElt& c_unit, long c_val, const RingElt& x); // psi_M(c x)

// Coset representative families for H \ D^x.
enum class FamilyKind { RamPlain, RamPrime, RamDoublePrime, UnramPlain, UnramPrime };

struct CosetFamily {
    ParamsPtr params;
    FamilyKind kind;
    TorusTag torus; // underlying torus of H (ramified cases; M otherwise)
    long m = 0;

    struct Rep {
        std::vector<long> tuple; // digit residue indices, slot r-1 for position r
        long i = 0;              // zeta- (ram) or w-power (unram) index
        QuatElt elt;
    };
    std::vector<Rep> reps;
    SubgroupDesc subgroup() const;

    long index_of_tuple(const std::vector<long>& tuple, long i) const;

    static CosetFamily build(const ParamsPtr& params, FamilyKind kind, const TorusTag& torus,
                             long m);
};

// x = h * rep(index); returns (index, h).  Brute-force scan with memoization.
class CosetDecomposer {
public:
    CosetDecomposer(const CosetFamily& family);
    std::pair<long, QuatElt> decompose(const QuatElt& x) const;

private:
    const CosetFamily& family_;
    SubgroupDesc subgroup_;
    mutable std::map<std::string, std::pair<long, std::string>> memo_;
    mutable std::map<std::string, QuatElt> witness_cache_;
};

// Transversal of the image of T^x in G_c = D^x / F^x (1 + P_D^(c-1)).
std::vector<QuatElt> torus_units_mod_center(const ParamsPtr& params, const TorusTag& tag, long c);
long torus_units_size_formula(long q, const TorusTag& tag, long c);

// |G_c|
Int group_order_gc(long q, long c);

// F/T split helpers on width-2 ring elements
RingElt comp_fixed(const RingElt& z);  // (z + sigma z)/2
RingElt comp_skew(const RingElt& z);   // (z - sigma z)/2

} // namespace toric
