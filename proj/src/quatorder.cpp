#include "toric/quatorder.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace toric {

namespace {
std::mutex& params_mutex() {
    static std::mutex m;
    return m;
}

// v_M(u) >= need(n) makes 1 + u*w lie in 1 + P_D^n
long one_unit_need(long n) { return n / 2; }
} // namespace

QuatParams::QuatParams(RingMode mode, long p, long f, long level)
    : mode_(mode), p_(p), f_(f), level_(level), store_level_(level + 4) {
    q_ = 1;
    for (long i = 0; i < f; ++i) q_ *= p;
    const auto& fq = this->fq();
    // digit enumeration order: increasing Teichmuller exponent, zero last
    for (long e = 0; e < q_ * q_ - 1; ++e) dset_.push_back(fq.exp(e));
    dset_.push_back(0);
    for (long e = 0; e < q_ - 1; ++e) fset_.push_back(fq.exp(e * (q_ + 1)));
    fset_.push_back(0);
}

std::shared_ptr<const QuatParams> QuatParams::get(RingMode mode, long p, long f, long level) {
    using Key = std::tuple<int, long, long, long>;
    static std::map<Key, std::shared_ptr<const QuatParams>> registry;
    Key key{static_cast<int>(mode), p, f, level};
    std::lock_guard<std::mutex> lock(params_mutex());
    auto it = registry.find(key);
    if (it != registry.end()) return it->second;
    auto ptr = std::shared_ptr<const QuatParams>(new QuatParams(mode, p, f, level));
    registry[key] = ptr;
    return ptr;
}

std::shared_ptr<const TruncRing> QuatParams::mring(long mlevel) const {
    return TruncRing::get(mode_, p_, f_, 2, mlevel);
}

const FqField& QuatParams::fq() const { return mring(1)->residue_field(); }

long QuatParams::zeta_res(long e) const {
    long m = zeta_order();
    e %= m;
    if (e < 0) e += m;
    return fq().exp(e);
}

bool QuatParams::res_in_base(long idx) const { return fq().pow_q(idx, q_) == idx; }

// ---------------------------------------------------------------------------

QuatElt::QuatElt(ParamsPtr params, RingElt a, RingElt b)
    : params_(std::move(params)), a_(std::move(a)), b_(std::move(b)) {
    dlevel_ = a_.level() + b_.level();
    long diff = a_.level() - b_.level();
    if (diff < 0 || diff > 1)
        throw std::invalid_argument("QuatElt: component levels must differ by 0 or 1");
}

QuatElt QuatElt::zero(const ParamsPtr& params, long dlevel) {
    if (dlevel < 2) throw std::invalid_argument("QuatElt: dlevel must be >= 2");
    auto ra = params->mring((dlevel + 1) / 2);
    auto rb = params->mring(dlevel / 2);
    return QuatElt(params, ra->zero(), rb->zero());
}

QuatElt QuatElt::one(const ParamsPtr& params, long dlevel) {
    QuatElt z = zero(params, dlevel);
    return QuatElt(params, z.a_.ring()->one(), z.b_);
}

QuatElt QuatElt::zeta_pow(const ParamsPtr& params, long e, long dlevel) {
    QuatElt z = zero(params, dlevel);
    return QuatElt(params, z.a_.ring()->teich_pow(e), z.b_);
}

QuatElt QuatElt::w(const ParamsPtr& params, long dlevel) {
    QuatElt z = zero(params, dlevel);
    return QuatElt(params, z.a_, z.b_.ring()->one());
}

QuatElt QuatElt::from_diag(const ParamsPtr& params, RingElt a, long dlevel) {
    QuatElt z = zero(params, dlevel);
    return QuatElt(params, a.reduce_to((dlevel + 1) / 2), z.b_);
}

bool QuatElt::is_zero() const { return a_.is_zero() && b_.is_zero(); }

long QuatElt::valuation() const {
    long va = 2 * a_.valuation();
    long vb = 2 * b_.valuation() + 1;
    return std::min({va, vb, dlevel_});
}

QuatElt operator+(const QuatElt& x, const QuatElt& y) {
    long dl = std::min(x.dlevel_, y.dlevel_);
    QuatElt xr = x.reduce_to(dl);
    QuatElt yr = y.reduce_to(dl);
    return QuatElt(xr.params_, xr.a_ + yr.a_, xr.b_ + yr.b_);
}

QuatElt operator-(const QuatElt& x, const QuatElt& y) { return x + (-y); }

QuatElt QuatElt::operator-() const { return QuatElt(params_, -a_, -b_); }

namespace {
// multiply by the base uniformizer: digit shift into a ring one level up
RingElt shift_up_into(const RingElt& x, const std::shared_ptr<const TruncRing>& target) {
    std::vector<long> d = x.digits();
    d.insert(d.begin(), 0);
    return RingElt::from_digits(target, d);
}
} // namespace

QuatElt operator*(const QuatElt& x, const QuatElt& y) {
    // (a + bw)(c + dw) = (ac + pi_F b sigma(d)) + (ad + b sigma(c)) w
    long dl = std::min(x.dlevel_, y.dlevel_);
    QuatElt xr = x.reduce_to(dl);
    QuatElt yr = y.reduce_to(dl);
    RingElt ac = xr.a_ * yr.a_;
    RingElt bsd = xr.b_ * yr.b_.frobenius();
    RingElt na = ac + shift_up_into(bsd, ac.ring());
    RingElt nb = (xr.a_ * yr.b_) + (xr.b_ * yr.a_.frobenius().reduce_to(xr.b_.level()));
    return QuatElt(xr.params_, na, nb.reduce_to(dl / 2));
}

QuatElt QuatElt::reduce_to(long dlevel) const {
    if (dlevel == dlevel_) return *this;
    if (dlevel > dlevel_) throw PrecisionError("QuatElt::reduce_to: cannot raise level");
    return QuatElt(params_, a_.reduce_to((dlevel + 1) / 2), b_.reduce_to(dlevel / 2));
}

RingElt QuatElt::reduced_trace() const { return a_.trace_to_base(); }

RingElt QuatElt::reduced_norm() const {
    RingElt asa = a_ * a_.frobenius();
    RingElt bsb = b_ * b_.frobenius();
    return asa - shift_up_into(bsb, asa.ring());
}

QuatElt QuatElt::conj_main() const { return QuatElt(params_, a_.frobenius(), -b_); }

QuatElt QuatElt::conj_by_w() const { return QuatElt(params_, a_.frobenius(), b_.frobenius()); }

QuatElt QuatElt::inv() const {
    if (!is_unit()) throw NonUnit();
    RingElt ninv = reduced_norm().inv();
    QuatElt c = conj_main();
    return QuatElt(params_, c.a_ * ninv, c.b_ * ninv.reduce_to(b_.level()));
}

QuatElt QuatElt::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    QuatElt r = one(params_, dlevel_);
    QuatElt b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bool QuatElt::operator==(const QuatElt& y) const {
    long dl = std::min(dlevel_, y.dlevel_);
    QuatElt xr = reduce_to(dl);
    QuatElt yr = y.reduce_to(dl);
    return xr.a_ == yr.a_ && xr.b_ == yr.b_;
}

QuatElt QuatElt::mul_w() const {
    RingElt na = shift_up_into(b_, params_->mring(b_.level() + 1));
    return QuatElt(params_, na, a_);
}

QuatElt QuatElt::div_w() const {
    if (a_.valuation() < 1) throw PrecisionError("div_w: valuation too small");
    return QuatElt(params_, b_, a_.shift_down(1));
}

QuatElt QuatElt::div_w_pow(long k) const {
    QuatElt r = *this;
    for (long i = 0; i < k; ++i) r = r.div_w();
    return r;
}

QuatElt QuatElt::right_div(const QuatElt& g) const {
    long v = g.valuation();
    if (v == 0) return *this * g.inv();
    if (valuation() < v) throw PrecisionError("right_div: valuation too small");
    // g = u0 * w^v with u0 = g w^-v, so x g^-1 = (x w^-v) u0^-1
    QuatElt u0 = g.div_w_pow(v);
    return this->div_w_pow(v) * u0.inv();
}

std::string QuatElt::key() const {
    std::ostringstream os;
    os << dlevel_ << "|";
    for (long d : a_.digits()) os << d << ",";
    os << "|";
    for (long d : b_.digits()) os << d << ",";
    return os.str();
}

std::string QuatElt::key_at(long dlevel) const {
    return reduce_to(std::min(dlevel, dlevel_)).key();
}

// ---------------------------------------------------------------------------

std::string TorusTag::str() const {
    switch (kind) {
        case TorusKind::M: return "M";
        case TorusKind::K: return "K" + std::to_string(s);
        case TorusKind::L: return "L" + std::to_string(s);
    }
    return "?";
}

TorusTag TorusTag::parse(const std::string& text, long s_param) {
    if (text.empty()) throw std::invalid_argument("TorusTag: empty");
    char c = text[0];
    long s = 0;
    if (text.size() > 1) {
        if (text.substr(1) == "s")
            s = s_param;
        else
            s = std::stol(text.substr(1));
    }
    if (c == 'M') return M();
    if (c == 'K') return K(s);
    if (c == 'L') return L(s);
    throw std::invalid_argument("TorusTag: unknown torus '" + text + "'");
}

QuatElt torus_gen(const ParamsPtr& params, const TorusTag& tag, long dlevel) {
    if (tag.kind == TorusKind::M) return QuatElt::zeta_pow(params, 1, dlevel);
    QuatElt z = QuatElt::zero(params, dlevel);
    RingElt digit = z.b().ring()->teich_pow(tag.zexp());
    return QuatElt(params, z.a(), digit); // zeta^zexp * w
}

RingElt comp_fixed(const RingElt& z) {
    RingElt half = z.ring()->from_int(2).inv();
    return (z + z.frobenius()) * half;
}

RingElt comp_skew(const RingElt& z) {
    RingElt half = z.ring()->from_int(2).inv();
    return (z - z.frobenius()) * half;
}

std::string TorusCanon::key() const {
    std::ostringstream os;
    os << vbit << "|" << lead << "|";
    for (long d : digits) os << d << ",";
    return os.str();
}

namespace {

// digit of the additive expansion of (y - 1) at D-level j
long dlevel_digit(const QuatElt& y, long j) {
    if (j % 2 == 0) {
        RingElt za = y.a() - y.a().ring()->one();
        return za.digits()[j / 2];
    }
    return y.b().digits()[(j - 1) / 2];
}

} // namespace

std::optional<TorusCanon> torus_canon(const ParamsPtr& params, const TorusTag& tag, long nu,
                                      const QuatElt& x) {
    const auto& fq = params->fq();
    long q = params->q();
    TorusCanon out;
    long v = x.valuation();
    if (v >= x.dlevel()) return std::nullopt; // zero at this precision
    QuatElt y = x;
    if (tag.kind == TorusKind::M) {
        if (v % 2 != 0) return std::nullopt;
        y = y.div_w_pow(v);
        if (!y.b().is_zero()) return std::nullopt;
        long res = y.a().residue();
        long e_full = fq.log(res);
        out.lead = e_full % (q + 1);
        out.vbit = 0;
        y = QuatElt(params, y.a() * y.a().ring()->teich_pow(-e_full), y.b());
        long inv2 = (params->p() + 1) / 2;
        for (long s = 1; s < nu; ++s) {
            RingElt za = y.a() - y.a().ring()->one();
            long dig = za.digits()[s];
            long fpart = fq.mul(fq.add(dig, fq.pow_q(dig, q)), inv2);
            long tpart = fq.sub(dig, fpart);
            out.digits.push_back(tpart);
            if (fpart != 0) {
                std::vector<long> dg(y.a().level(), 0);
                dg[0] = fq.exp(0);
                dg[s] = fpart;
                RingElt clear = RingElt::from_digits(y.a().ring(), dg);
                y = QuatElt(params, y.a() * clear.inv(), y.b());
            }
        }
        return out;
    }
    long k = tag.zexp();
    out.vbit = v % 2;
    for (long i = 0; i < v; ++i) y = y.right_div(torus_gen(params, tag, y.dlevel()));
    long res = y.a().residue();
    if (res == 0 || !params->res_in_base(res)) return std::nullopt;
    {
        RingElt ta = y.a().ring()->teichmuller(res).inv();
        RingElt tb = y.b().ring()->teichmuller(res).inv();
        y = QuatElt(params, y.a() * ta, y.b() * tb);
    }
    for (long j = 1; j < nu; ++j) {
        long s = j / 2;
        long dig = dlevel_digit(y, j);
        long e_dir = (j % 2 == 0) ? k * s * (q + 1) : k * (s * (q + 1) + 1);
        long d = dig == 0 ? 0 : fq.mul(dig, fq.inv(params->zeta_res(e_dir)));
        if (d != 0 && !params->res_in_base(d)) return std::nullopt;
        if (j % 2 == 0) {
            if (dig != 0) {
                // the even-level direction lies in F; clear it multiplicatively
                std::vector<long> dg(y.a().level(), 0);
                dg[0] = fq.exp(0);
                dg[s] = dig;
                RingElt ci = RingElt::from_digits(y.a().ring(), dg).inv();
                y = QuatElt(params, y.a() * ci, y.b() * ci.reduce_to(y.b().level()));
            }
        } else {
            out.digits.push_back(d);
        }
    }
    return out;
}

QuatElt torus_canon_rep(const ParamsPtr& params, const TorusTag& tag, long nu,
                        const TorusCanon& canon, long dlevel) {
    const auto& fq = params->fq();
    long q = params->q();
    if (tag.kind == TorusKind::M) {
        auto ring = params->mring((dlevel + 1) / 2);
        std::vector<long> dg(ring->level(), 0);
        dg[0] = params->zeta_res(canon.lead);
        for (long s = 1; s < nu && s < ring->level(); ++s) {
            long t = (s - 1) < static_cast<long>(canon.digits.size()) ? canon.digits[s - 1] : 0;
            dg[s] = fq.mul(dg[0], t);
        }
        return QuatElt::from_diag(params, RingElt::from_digits(ring, dg), dlevel);
    }
    long k = tag.zexp();
    QuatElt acc = QuatElt::one(params, dlevel);
    long slot = 0;
    for (long j = 1; j < nu; ++j) {
        if (j % 2 == 0) continue;
        long s = j / 2;
        long d = slot < static_cast<long>(canon.digits.size()) ? canon.digits[slot] : 0;
        ++slot;
        if (d == 0) continue;
        long e_dir = k * (s * (q + 1) + 1);
        long digit = fq.mul(d, params->zeta_res(e_dir));
        std::vector<long> dg(acc.b().level(), 0);
        if (s < acc.b().level()) dg[s] = digit;
        acc = QuatElt(params, acc.a(), acc.b() + RingElt::from_digits(acc.b().ring(), dg));
    }
    if (canon.vbit) acc = torus_gen(params, tag, dlevel + 1) * acc;
    return acc;
}

// ---------------------------------------------------------------------------

TorusQuotient::TorusQuotient(ParamsPtr params, TorusTag tag, long nu)
    : params_(std::move(params)), tag_(tag), nu_(nu) {
    long q = params_->q();
    long store = params_->store_level();
    std::vector<std::vector<long>> digit_choices;
    std::vector<long> leads;
    if (tag.kind == TorusKind::M) {
        for (long e = 0; e <= q; ++e) leads.push_back(e);
        std::vector<long> tset;
        const auto& fq = params_->fq();
        for (long e = 0; e < q * q - 1; ++e) {
            long r = fq.exp(e);
            if (fq.add(r, fq.pow_q(r, q)) == 0) tset.push_back(r);
        }
        tset.push_back(0);
        digit_choices.assign(nu - 1, tset);
    } else {
        leads = {0, 1};
        for (long j = 1; j < nu; ++j)
            if (j % 2 == 1) digit_choices.push_back(params_->fset());
    }
    std::vector<long> cursor(digit_choices.size(), 0);
    for (long lead : leads) {
        std::fill(cursor.begin(), cursor.end(), 0);
        while (true) {
            TorusCanon canon;
            if (tag.kind == TorusKind::M)
                canon.lead = lead;
            else
                canon.vbit = lead;
            for (size_t i = 0; i < cursor.size(); ++i)
                canon.digits.push_back(digit_choices[i][cursor[i]]);
            index_[canon.key()] = static_cast<long>(elements_.size());
            elements_.push_back(torus_canon_rep(params_, tag_, nu_, canon, store));
            canons_.push_back(canon);
            bool advanced = false;
            for (long i = static_cast<long>(cursor.size()) - 1; i >= 0; --i) {
                if (++cursor[i] < static_cast<long>(digit_choices[i].size())) {
                    advanced = true;
                    break;
                }
                cursor[i] = 0;
            }
            if (!advanced) break;
        }
    }
    auto canon1 = torus_canon(params_, tag_, nu_, QuatElt::one(params_, store));
    id_index_ = index_.at(canon1->key());
}

long TorusQuotient::index_of(const QuatElt& x) const {
    auto canon = torus_canon(params_, tag_, nu_, x);
    if (!canon) return -1;
    auto it = index_.find(canon->key());
    return it == index_.end() ? -1 : it->second;
}

long TorusQuotient::mul(long i, long j) const {
    long r = index_of(elements_[i] * elements_[j]);
    if (r < 0) throw std::logic_error("TorusQuotient::mul: product left the torus");
    return r;
}

long TorusQuotient::inv(long i) const {
    long r = index_of(elements_[i].inv());
    if (r < 0) throw std::logic_error("TorusQuotient::inv: inverse left the torus");
    return r;
}

std::vector<long> TorusQuotient::layer(long j) const {
    std::vector<long> out;
    for (size_t idx = 0; idx < canons_.size(); ++idx) {
        const TorusCanon& c = canons_[idx];
        if (c.vbit != 0 || c.lead != 0) continue;
        bool ok = true;
        if (tag_.kind == TorusKind::M) {
            for (long s = 1; s < j && s - 1 < static_cast<long>(c.digits.size()); ++s)
                if (c.digits[s - 1] != 0) ok = false;
        } else {
            long slot = 0;
            for (long lvl = 1; lvl < nu_; ++lvl) {
                if (lvl % 2 == 0) continue;
                if (lvl < j && slot < static_cast<long>(c.digits.size()) && c.digits[slot] != 0)
                    ok = false;
                ++slot;
            }
        }
        if (ok) out.push_back(static_cast<long>(idx));
    }
    return out;
}

// ---------------------------------------------------------------------------

std::optional<SubgroupWitness> subgroup_decompose(const ParamsPtr& params, const SubgroupDesc& H,
                                                  const QuatElt& x) {
    const auto& fq = params->fq();
    long q = params->q();
    long v = x.valuation();
    if (v >= x.dlevel()) return std::nullopt;
    if (H.shape == SubgroupDesc::Shape::RamH) {
        long t = (H.m + 1) / 2;
        QuatElt y = x;
        for (long i = 0; i < v; ++i) y = y.right_div(torus_gen(params, H.torus, y.dlevel()));
        long k = H.torus.zexp();
        RingElt aF = comp_fixed(y.a());
        RingElt aT = comp_skew(y.a());
        RingElt bk = y.b() * y.b().ring()->teich_pow(-k);
        RingElt bF = comp_fixed(bk) * y.b().ring()->teich_pow(k);
        RingElt bT = comp_skew(bk) * y.b().ring()->teich_pow(k);
        QuatElt k0(params, aF, bF);
        if (!k0.is_unit()) return std::nullopt;
        QuatElt rest(params, aT, bT);
        if (!rest.is_zero() && rest.valuation() < t) return std::nullopt;
        QuatElt one_unit = QuatElt::one(params, y.dlevel()) + k0.inv() * rest;
        QuatElt torus_part = k0;
        if (v % 2 == 1) torus_part = torus_gen(params, H.torus, k0.dlevel() + 1) * k0;
        return SubgroupWitness{torus_part, one_unit};
    }
    if (v % 2 != 0) return std::nullopt;
    QuatElt y = x.div_w_pow(v);
    RingElt a = y.a();
    if (!a.is_unit()) return std::nullopt;
    bool base_lead = params->res_in_base(a.residue());
    RingElt wcomp = a.inv().reduce_to(y.b().level()) * y.b();
    long m = H.m;
    switch (H.shape) {
        case SubgroupDesc::Shape::UnramH: {
            long n = std::max(m, 1L);
            if (wcomp.valuation() < one_unit_need(n)) return std::nullopt;
            break;
        }
        case SubgroupDesc::Shape::Hp: {
            if (!base_lead) return std::nullopt;
            if (wcomp.valuation() < one_unit_need(m)) return std::nullopt;
            break;
        }
        case SubgroupDesc::Shape::Hpp: {
            if (!base_lead) return std::nullopt;
            if (wcomp.valuation() < one_unit_need(m + 1)) return std::nullopt;
            break;
        }
        case SubgroupDesc::Shape::Hp1: {
            if (!base_lead) return std::nullopt;
            if (wcomp.valuation() < one_unit_need(m)) return std::nullopt;
            if (m % 2 == 1) {
                long s = (m - 1) / 2;
                long dig = wcomp.digits()[s];
                if (dig != 0) {
                    long d = fq.mul(dig, fq.inv(params->zeta_res(1)));
                    if (!params->res_in_base(d)) return std::nullopt;
                }
            }
            break;
        }
        default:
            return std::nullopt;
    }
    (void)q;
    QuatElt torus_part = QuatElt::from_diag(params, a, y.dlevel());
    QuatElt one_unit(params, a.ring()->one(), wcomp);
    return SubgroupWitness{torus_part, one_unit};
}

bool subgroup_member(const ParamsPtr& params, const SubgroupDesc& H, const QuatElt& x) {
    return subgroup_decompose(params, H, x).has_value();
}

// ---------------------------------------------------------------------------

RootOfUnity psi_D(const FracQuatElt& c, const QuatElt& x) {
    long w = -c.val;
    if (w <= 0) return RootOfUnity::one();
    QuatElt z = c.unit * x;
    if (z.dlevel() < w) throw PrecisionError("psi_D: insufficient level");
    if (w % 2 == 0) return AdditivePsi0::eval(z.a().trace_to_base(), -w / 2);
    long s = (w - 1) / 2;
    if (s == 0) return RootOfUnity::one();
    return AdditivePsi0::eval(z.b().trace_to_base(), -s);
}

RootOfUnity psi_E_frac(const RingElt& c_unit, long c_val, const RingElt& x) {
    if (c_val >= 0) return RootOfUnity::one();
    RingElt z = c_unit * x;
    return AdditivePsi0::eval(z.trace_to_base(), c_val);
}

// ---------------------------------------------------------------------------

SubgroupDesc CosetFamily::subgroup() const {
    switch (kind) {
        case FamilyKind::RamPlain:
        case FamilyKind::RamPrime:
        case FamilyKind::RamDoublePrime:
            return SubgroupDesc::ram_h(torus, m);
        default:
            return SubgroupDesc::unram_h(m);
    }
}

long CosetFamily::index_of_tuple(const std::vector<long>& tuple, long i) const {
    for (size_t idx = 0; idx < reps.size(); ++idx)
        if (reps[idx].i == i && reps[idx].tuple == tuple) return static_cast<long>(idx);
    return -1;
}

CosetFamily CosetFamily::build(const ParamsPtr& params, FamilyKind kind, const TorusTag& torus,
                               long m) {
    CosetFamily fam;
    fam.params = params;
    fam.kind = kind;
    fam.torus = torus;
    fam.m = m;
    long q = params->q();
    long store = params->store_level();
    bool ram = kind == FamilyKind::RamPlain || kind == FamilyKind::RamPrime ||
               kind == FamilyKind::RamDoublePrime;
    if (ram) {
        long len = (m - 1) / 2;
        std::vector<long> cursor(len, 0);
        std::vector<QuatElt> genpow;
        genpow.push_back(QuatElt::one(params, store));
        for (long r = 1; r <= len; ++r)
            genpow.push_back(torus_gen(params, torus, store + r).pow(r).reduce_to(store));
        for (long i = 0; i <= q; ++i) {
            std::fill(cursor.begin(), cursor.end(), 0);
            while (true) {
                Rep rep;
                rep.i = i;
                rep.tuple.assign(len, 0);
                QuatElt sum = QuatElt::one(params, store);
                for (long r = 1; r <= len; ++r) {
                    long alpha = params->fset()[cursor[r - 1]];
                    rep.tuple[r - 1] = alpha;
                    if (alpha == 0) continue;
                    long e_twist;
                    switch (kind) {
                        case FamilyKind::RamPlain: e_twist = (q + 1) / 2; break;
                        case FamilyKind::RamPrime: e_twist = i * (1 - q); break;
                        default: e_twist = 1 + i * (1 - q); break;
                    }
                    RingElt digit =
                        sum.a().ring()->teichmuller(alpha) * sum.a().ring()->teich_pow(e_twist);
                    sum = sum + QuatElt::from_diag(params, digit, store) * genpow[r];
                }
                rep.elt = sum * QuatElt::zeta_pow(params, i, store);
                fam.reps.push_back(rep);
                bool advanced = false;
                for (long t = len - 1; t >= 0; --t) {
                    if (++cursor[t] < static_cast<long>(params->fset().size())) {
                        advanced = true;
                        break;
                    }
                    cursor[t] = 0;
                }
                if (!advanced) break;
            }
        }
        return fam;
    }
    std::vector<long> positions;
    for (long r = 1; r < m; r += 2) positions.push_back(r);
    const std::vector<long>& digit_set =
        kind == FamilyKind::UnramPlain ? params->dset() : params->fset();
    std::vector<QuatElt> wpow;
    wpow.push_back(QuatElt::one(params, store));
    for (long r = 1; r < m; ++r)
        wpow.push_back(QuatElt::w(params, store + r).pow(r).reduce_to(store));
    QuatElt lead = kind == FamilyKind::UnramPlain ? QuatElt::w(params, store + 1)
                                                  : torus_gen(params, TorusTag::L(0), store + 1);
    std::vector<long> cursor(positions.size(), 0);
    for (long i = 0; i <= 1; ++i) {
        std::fill(cursor.begin(), cursor.end(), 0);
        while (true) {
            Rep rep;
            rep.i = i;
            rep.tuple.assign(m > 0 ? m - 1 : 0, 0);
            QuatElt sum = QuatElt::one(params, store);
            for (size_t t = 0; t < positions.size(); ++t) {
                long r = positions[t];
                long alpha = digit_set[cursor[t]];
                rep.tuple[r - 1] = alpha;
                if (alpha == 0) continue;
                RingElt digit = sum.a().ring()->teichmuller(alpha);
                if (kind == FamilyKind::UnramPrime) digit = digit * sum.a().ring()->teich_pow(1);
                sum = sum + QuatElt::from_diag(params, digit, store) * wpow[r];
            }
            rep.elt = i == 0 ? sum : lead * sum;
            fam.reps.push_back(rep);
            bool advanced = false;
            for (long t = static_cast<long>(cursor.size()) - 1; t >= 0; --t) {
                if (++cursor[t] < static_cast<long>(digit_set.size())) {
                    advanced = true;
                    break;
                }
                cursor[t] = 0;
            }
            if (!advanced) break;
        }
    }
    return fam;
}

// ---------------------------------------------------------------------------

CosetDecomposer::CosetDecomposer(const CosetFamily& family)
    : family_(family), subgroup_(family.subgroup()) {}

std::pair<long, QuatElt> CosetDecomposer::decompose(const QuatElt& x) const {
    std::string key = x.key();
    auto it = memo_.find(key);
    if (it != memo_.end()) return {it->second.first, witness_cache_.at(it->second.second)};
    long vx = x.valuation();
    for (size_t idx = 0; idx < family_.reps.size(); ++idx) {
        const QuatElt& rep = family_.reps[idx].elt;
        if (vx < rep.valuation()) continue;
        QuatElt h = x.right_div(rep);
        if (subgroup_member(family_.params, subgroup_, h)) {
            std::string hk = h.key();
            memo_[key] = {static_cast<long>(idx), hk};
            witness_cache_.emplace(hk, h);
            return {static_cast<long>(idx), h};
        }
    }
    throw NoCoset();
}

// ---------------------------------------------------------------------------

std::vector<QuatElt> torus_units_mod_center(const ParamsPtr& params, const TorusTag& tag, long c) {
    long nu = tag.kind == TorusKind::M ? c / 2 : c - 1;
    TorusQuotient quot(params, tag, nu);
    return quot.elements();
}

long torus_units_size_formula(long q, const TorusTag& tag, long c) {
    auto ipow = [](long b, long e) {
        long r = 1;
        for (long i = 0; i < e; ++i) r *= b;
        return r;
    };
    if (tag.kind == TorusKind::M) return (q + 1) * ipow(q, (c - 2) / 2);
    return 2 * ipow(q, (c - 2) - (c - 2) / 2);
}

Int group_order_gc(long q, long c) {
    auto ipow = [](long b, long e) {
        Int r = 1;
        for (long i = 0; i < e; ++i) r *= b;
        return r;
    };
    if (c % 2 == 1) return Int(2) * (q + 1) * ipow(q, 3 * ((c - 1) / 2) - 1);
    return Int(2) * (q + 1) * ipow(q, 3 * ((c - 2) / 2));
}

} // namespace toric
