#include "toric/localring.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

namespace toric {

RootOfUnity RootOfUnity::make(long order, long exp) {
    exp %= order;
    if (exp < 0) exp += order;
    if (exp == 0) return {1, 0};
    long g = std::gcd(order, exp);
    return {order / g, exp / g};
}

RootOfUnity RootOfUnity::mul(const RootOfUnity& o) const {
    long n = lcm_long(order, o.order);
    return make(n, exp * (n / order) + o.exp * (n / o.order));
}

Cyc RootOfUnity::to_cyc(const std::shared_ptr<const CycContext>& ctx) const {
    if (ctx->N() % order != 0) throw std::invalid_argument("RootOfUnity: order does not divide N");
    return Cyc::root_of_unity(ctx, exp * (ctx->N() / order));
}

namespace {

std::vector<long> fp_poly_mulmod(const std::vector<long>& a, const std::vector<long>& b,
                                 const std::vector<long>& h, long p) {
    long d = static_cast<long>(h.size()) - 1;
    std::vector<long> c(std::max<size_t>(2 * d - 1, 1), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    for (long k = static_cast<long>(c.size()) - 1; k >= d; --k) {
        long t = c[k];
        if (t == 0) continue;
        c[k] = 0;
        for (long i = 0; i < d; ++i) c[k - d + i] = ((c[k - d + i] - t * h[i]) % p + p) % p;
    }
    c.resize(d);
    return c;
}

std::vector<long> fp_poly_powmod(std::vector<long> base, Int e, const std::vector<long>& h, long p) {
    std::vector<long> r(static_cast<size_t>(h.size() - 1), 0);
    r[0] = 1;
    base.resize(h.size() - 1, 0);
    while (e > 0) {
        if ((e & 1) != 0) r = fp_poly_mulmod(r, base, h, p);
        base = fp_poly_mulmod(base, base, h, p);
        e >>= 1;
    }
    return r;
}

bool fp_poly_is_one(const std::vector<long>& a) {
    if (a.empty() || a[0] != 1) return false;
    for (size_t i = 1; i < a.size(); ++i)
        if (a[i] != 0) return false;
    return true;
}

bool fp_poly_is_x(const std::vector<long>& a) {
    if (a.size() < 2 || a[0] != 0 || a[1] != 1) return false;
    for (size_t i = 2; i < a.size(); ++i)
        if (a[i] != 0) return false;
    return true;
}

std::vector<long> prime_factors_long(Int n) {
    std::vector<long> out;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(static_cast<long>(p));
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(static_cast<long>(n));
    return out;
}

// x^(p^k) mod h
std::vector<long> fp_frob_power(const std::vector<long>& h, long p, long k) {
    std::vector<long> x(h.size() - 1, 0);
    if (x.size() > 1)
        x[1] = 1;
    else
        x[0] = (p - h[0]) % p; // d = 1: x = -h0
    for (long i = 0; i < k; ++i) x = fp_poly_powmod(x, Int(p), h, p);
    return x;
}

bool is_irreducible(const std::vector<long>& h, long p) {
    long d = static_cast<long>(h.size()) - 1;
    if (d == 1) return true;
    std::vector<long> x(h.size() - 1, 0);
    x[1] = 1;
    if (fp_frob_power(h, p, d) != x) return false;
    for (long ell : prime_factors_long(Int(d))) {
        if (fp_frob_power(h, p, d / ell) == x) return false;
    }
    return true;
}

bool is_primitive(const std::vector<long>& h, long p) {
    long d = static_cast<long>(h.size()) - 1;
    Int order = 1;
    for (long i = 0; i < d; ++i) order *= p;
    order -= 1;
    std::vector<long> x(h.size() - 1, 0);
    if (d > 1)
        x[1] = 1;
    else
        x[0] = (p - h[0]) % p;
    if (!fp_poly_is_one(fp_poly_powmod(x, order, h, p))) return false;
    for (long ell : prime_factors_long(order)) {
        if (fp_poly_is_one(fp_poly_powmod(x, order / ell, h, p))) return false;
    }
    return true;
}

// Deterministic modulus: first monic irreducible primitive polynomial of
// degree d over F_p in lexicographic coefficient order (c_0 least significant).
std::vector<long> choose_modulus(long p, long d) {
    long count = 1;
    for (long i = 0; i < d; ++i) count *= p;
    for (long m = 0; m < count; ++m) {
        std::vector<long> h(d + 1, 0);
        long t = m;
        for (long i = 0; i < d; ++i) {
            h[i] = t % p;
            t /= p;
        }
        h[d] = 1;
        if (h[0] == 0) continue; // x | h
        if (is_irreducible(h, p) && is_primitive(h, p)) return h;
    }
    throw std::logic_error("choose_modulus: no primitive polynomial found");
}

int64_t pow_i64(long b, long e) {
    int64_t r = 1;
    for (long i = 0; i < e; ++i) r *= b;
    return r;
}

} // namespace

FqField::FqField(long p, long d) : p_(p), d_(d), size_(static_cast<long>(pow_i64(p, d))) {
    h_ = choose_modulus(p, d);
    exp_.assign(size_ - 1, 0);
    log_.assign(size_, -1);
    std::vector<long> cur(d_, 0);
    cur[0] = 1;
    std::vector<long> x(d_, 0);
    if (d_ > 1)
        x[1] = 1;
    else
        x[0] = (p - h_[0]) % p;
    for (long e = 0; e < size_ - 1; ++e) {
        long idx = 0;
        for (long i = d_ - 1; i >= 0; --i) idx = idx * p_ + cur[i];
        exp_[e] = idx;
        log_[idx] = e;
        cur = fp_poly_mulmod(cur, x, h_, p_);
    }
}

long FqField::add(long a, long b) const {
    long r = 0, mul = 1;
    for (long i = 0; i < d_; ++i) {
        r += ((a % p_ + b % p_) % p_) * mul;
        a /= p_;
        b /= p_;
        mul *= p_;
    }
    return r;
}

long FqField::neg(long a) const {
    long r = 0, mul = 1;
    for (long i = 0; i < d_; ++i) {
        r += ((p_ - a % p_) % p_) * mul;
        a /= p_;
        mul *= p_;
    }
    return r;
}

long FqField::mul(long a, long b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (size_ - 1)];
}

long FqField::inv(long a) const {
    if (a == 0) throw NonUnit();
    return exp_[(size_ - 1 - log_[a]) % (size_ - 1)];
}

long FqField::pow_q(long a, long q) const {
    if (a == 0) return 0;
    long e = static_cast<long>(Int(Int(log_[a]) * q % (size_ - 1)));
    return exp_[e];
}

long FqField::exp(long e) const {
    e %= (size_ - 1);
    if (e < 0) e += size_ - 1;
    return exp_[e];
}

long FqField::log(long a) const {
    if (a == 0) throw NonUnit();
    return log_[a];
}

long FqField::trace_to_fp(long a) const {
    long sum = 0;
    long cur = a;
    for (long i = 0; i < d_; ++i) {
        sum = add(sum, cur);
        cur = pow_q(cur, p_);
    }
    return sum % p_; // the conjugate sum lies in F_p
}

// ---------------------------------------------------------------------------

namespace {
std::mutex& ring_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

std::shared_ptr<const TruncRing> TruncRing::get(RingMode mode, long p, long f, long width, long level) {
    using Key = std::tuple<int, long, long, long, long>;
    static std::map<Key, std::shared_ptr<const TruncRing>> registry;
    Key key{static_cast<int>(mode), p, f, width, level};
    std::lock_guard<std::mutex> lock(ring_mutex());
    auto it = registry.find(key);
    if (it != registry.end()) return it->second;
    auto ring = std::shared_ptr<const TruncRing>(new TruncRing(mode, p, f, width, level));
    registry[key] = ring;
    return ring;
}

// Low-level mixed-mode helpers on raw coefficient vectors (length d, mod p^level).

std::vector<int64_t> TruncRing::raw_mul(const std::vector<int64_t>& a,
                                        const std::vector<int64_t>& b) const {
    std::vector<int64_t> prod(2 * d_ - 1, 0);
    for (long i = 0; i < d_; ++i) {
        if (a[i] == 0) continue;
        for (long j = 0; j < d_; ++j) {
            if (b[j] == 0) continue;
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % pj_;
        }
    }
    std::vector<int64_t> c(prod.begin(), prod.begin() + d_);
    for (long k = d_; k < 2 * d_ - 1; ++k) {
        if (prod[k] == 0) continue;
        const auto& row = red_rows_[k - d_];
        for (long i = 0; i < d_; ++i) c[i] = (c[i] + prod[k] * row[i]) % pj_;
    }
    return c;
}

std::vector<int64_t> TruncRing::raw_pow(std::vector<int64_t> base, Int e) const {
    std::vector<int64_t> r(d_, 0);
    r[0] = 1;
    while (e > 0) {
        if ((e & 1) != 0) r = raw_mul(r, base);
        base = raw_mul(base, base);
        e >>= 1;
    }
    return r;
}

std::vector<int64_t> TruncRing::raw_inv(const std::vector<int64_t>& a) const {
    long r = 0;
    for (long i = d_ - 1; i >= 0; --i) r = r * p_ + a[i] % p_;
    if (r == 0) throw NonUnit();
    long rinv = fq_->inv(r);
    std::vector<int64_t> z(d_, 0);
    {
        long t = rinv;
        for (long i = 0; i < d_; ++i) {
            z[i] = t % p_;
            t /= p_;
        }
    }
    for (long it = 0; it < level_ + 2; ++it) {
        // z <- z * (2 - a z)
        std::vector<int64_t> az = raw_mul(a, z);
        std::vector<int64_t> e(d_, 0);
        e[0] = 2 % pj_;
        for (long i = 0; i < d_; ++i) e[i] = ((e[i] - az[i]) % pj_ + pj_) % pj_;
        z = raw_mul(z, e);
    }
    return z;
}

std::vector<int64_t> TruncRing::raw_eval_frob_p(const std::vector<int64_t>& a) const {
    // evaluate sum a_i * frob_p_(x)^i
    std::vector<int64_t> acc(d_, 0);
    for (long i = d_ - 1; i >= 0; --i) {
        acc = raw_mul(acc, frob_p_);
        acc[0] = (acc[0] + a[i]) % pj_;
    }
    return acc;
}

TruncRing::TruncRing(RingMode mode, long p, long f, long width, long level)
    : mode_(mode), p_(p), f_(f), width_(width), level_(level), d_(f * width) {
    if (p < 3) throw std::invalid_argument("TruncRing: p must be an odd prime >= 3");
    for (long t = 2; t * t <= p; ++t)
        if (p % t == 0) throw std::invalid_argument("TruncRing: p must be prime");
    if (p % 2 == 0) throw std::invalid_argument("TruncRing: p must be odd");
    if (level < 1) throw std::invalid_argument("TruncRing: level must be >= 1");
    q_ = static_cast<long>(pow_i64(p, f));
    pj_ = static_cast<long>(pow_i64(p, level));
    {
        static std::map<std::pair<long, long>, std::shared_ptr<const FqField>> fq_registry;
        static std::mutex fq_mutex;
        std::lock_guard<std::mutex> lock(fq_mutex);
        auto key = std::make_pair(p, d_);
        auto it = fq_registry.find(key);
        if (it == fq_registry.end()) {
            fq_ = std::make_shared<const FqField>(p, d_);
            fq_registry[key] = fq_;
        } else {
            fq_ = it->second;
        }
    }
    if (mode_ == RingMode::UnramifiedMixed) {
        h_.assign(d_ + 1, 0);
        for (long i = 0; i <= d_; ++i) h_[i] = fq_->modulus()[i] % pj_;
        std::vector<int64_t> row(d_);
        for (long i = 0; i < d_; ++i) row[i] = (pj_ - h_[i]) % pj_;
        red_rows_.push_back(row);
        for (long k = 1; k + 1 < d_; ++k) {
            std::vector<int64_t> next(d_, 0);
            int64_t top = row[d_ - 1];
            for (long i = d_ - 1; i >= 1; --i) next[i] = row[i - 1];
            if (top != 0)
                for (long i = 0; i < d_; ++i) next[i] = (next[i] + top * red_rows_[0][i]) % pj_;
            red_rows_.push_back(next);
            row = next;
        }
        // Teichmuller lift of the residue generator: fixed point of y -> y^(p^d).
        {
            std::vector<int64_t> y(d_, 0);
            if (d_ == 1) {
                y[0] = fq_->exp(1);
            } else {
                y[1] = 1;
            }
            Int e = 1;
            for (long i = 0; i < d_; ++i) e *= p_;
            for (long it = 0; it < level_; ++it) y = raw_pow(y, e);
            teich_gen_ = y;
        }
        // p-power automorphism generator image: Newton-lift the root of h near x^p.
        {
            std::vector<long> xp = fp_frob_power(fq_->modulus(), p_, 1);
            std::vector<int64_t> y(d_, 0);
            for (size_t i = 0; i < xp.size(); ++i) y[i] = xp[i];
            auto eval_h = [&](const std::vector<int64_t>& z, bool deriv) {
                std::vector<int64_t> acc(d_, 0);
                long top = deriv ? d_ - 1 : d_;
                for (long i = top; i >= 0; --i) {
                    acc = raw_mul(acc, z);
                    int64_t coeff = deriv ? (h_is_coeff(i + 1) * (i + 1)) % pj_ : h_is_coeff(i);
                    acc[0] = (acc[0] + coeff) % pj_;
                }
                return acc;
            };
            for (long it = 0; it < level_ + 2; ++it) {
                std::vector<int64_t> fy = eval_h(y, false);
                bool zero = std::all_of(fy.begin(), fy.end(), [](int64_t v) { return v == 0; });
                if (zero) break;
                std::vector<int64_t> dfy = eval_h(y, true);
                std::vector<int64_t> corr = raw_mul(fy, raw_inv(dfy));
                for (long i = 0; i < d_; ++i) y[i] = ((y[i] - corr[i]) % pj_ + pj_) % pj_;
            }
            std::vector<int64_t> fy = eval_h(y, false);
            if (!std::all_of(fy.begin(), fy.end(), [](int64_t v) { return v == 0; }))
                throw std::logic_error("TruncRing: frobenius lift failed");
            frob_p_ = y;
        }
    }
    teich_cache_.assign(fq_->size(), {});
}

int64_t TruncRing::h_is_coeff(long i) const {
    if (i == d_) return 1 % pj_;
    if (i > d_) return 0;
    return h_[i];
}

std::shared_ptr<const TruncRing> TruncRing::at_level(long level) const {
    return get(mode_, p_, f_, width_, level);
}

RingElt TruncRing::zero() const {
    long n = mode_ == RingMode::UnramifiedMixed ? d_ : d_ * level_;
    return RingElt(shared_from_this(), std::vector<int64_t>(n, 0));
}

RingElt TruncRing::one() const { return from_int(1); }

RingElt TruncRing::from_int(long n) const {
    RingElt z = zero();
    std::vector<int64_t> data = z.data();
    if (mode_ == RingMode::UnramifiedMixed) {
        int64_t v = n % pj_;
        if (v < 0) v += pj_;
        data[0] = v;
    } else {
        // constant digit n mod p at t^0
        int64_t v = n % p_;
        if (v < 0) v += p_;
        data[0] = v;
    }
    return RingElt(shared_from_this(), std::move(data));
}

RingElt TruncRing::teichmuller(long residue_index) const {
    if (residue_index == 0) return zero();
    if (!teich_cache_[residue_index].empty())
        return RingElt(shared_from_this(), teich_cache_[residue_index]);
    RingElt r = teich_pow(fq_->log(residue_index));
    teich_cache_[residue_index] = r.data();
    return r;
}

RingElt TruncRing::teich_pow(long e) const {
    long m = fq_->size() - 1;
    e %= m;
    if (e < 0) e += m;
    if (mode_ == RingMode::EqualChar) {
        std::vector<int64_t> data(d_ * level_, 0);
        long idx = fq_->exp(e);
        for (long i = 0; i < d_; ++i) {
            data[i * level_] = idx % p_;
            idx /= p_;
        }
        return RingElt(shared_from_this(), std::move(data));
    }
    return RingElt(shared_from_this(), raw_pow(teich_gen_, Int(e)));
}

std::string TruncRing::describe() const {
    std::ostringstream os;
    os << (mode_ == RingMode::UnramifiedMixed ? "GR(" : "LS(") << p_ << "^" << level_ << ","
       << d_ << ")";
    return os.str();
}

// ---------------------------------------------------------------------------

bool RingElt::is_zero() const {
    for (int64_t v : data_)
        if (v != 0) return false;
    return true;
}

namespace {
void check_ring(const RingElt& a, const RingElt& b) {
    if (a.ring()->mode() != b.ring()->mode() || a.ring()->p() != b.ring()->p() ||
        a.ring()->f() != b.ring()->f() || a.ring()->width() != b.ring()->width())
        throw std::invalid_argument("RingElt: ring mismatch");
}
} // namespace

RingElt operator+(const RingElt& a, const RingElt& b) {
    check_ring(a, b);
    if (a.level() != b.level()) {
        long lv = std::min(a.level(), b.level());
        return a.reduce_to(lv) + b.reduce_to(lv);
    }
    const auto& ring = *a.ring();
    std::vector<int64_t> c(a.data());
    const auto& bd = b.data();
    long m = ring.mode() == RingMode::UnramifiedMixed ? ring.pj() : ring.p();
    for (size_t i = 0; i < c.size(); ++i) c[i] = (c[i] + bd[i]) % m;
    return RingElt(a.ring(), std::move(c));
}

RingElt operator-(const RingElt& a, const RingElt& b) { return a + (-b); }

RingElt RingElt::operator-() const {
    const auto& ring = *ring_;
    std::vector<int64_t> c(data_);
    long m = ring.mode() == RingMode::UnramifiedMixed ? ring.pj() : ring.p();
    for (auto& v : c) v = (m - v) % m;
    return RingElt(ring_, std::move(c));
}

RingElt operator*(const RingElt& a, const RingElt& b) {
    check_ring(a, b);
    if (a.level() != b.level()) {
        long lv = std::min(a.level(), b.level());
        return a.reduce_to(lv) * b.reduce_to(lv);
    }
    const auto& ring = *a.ring();
    if (ring.mode() == RingMode::UnramifiedMixed)
        return RingElt(a.ring(), ring.raw_mul(a.data(), b.data()));
    long d = ring.deg();
    long lv = ring.level();
    const auto& fq = ring.residue_field();
    const auto& ad = a.data();
    const auto& bd = b.data();
    auto coeff = [&](const std::vector<int64_t>& v, long s) {
        long idx = 0;
        for (long i = d - 1; i >= 0; --i) idx = idx * ring.p() + v[i * lv + s];
        return idx;
    };
    std::vector<int64_t> c(d * lv, 0);
    for (long s = 0; s < lv; ++s) {
        long acc = 0;
        for (long u = 0; u <= s; ++u) acc = fq.add(acc, fq.mul(coeff(ad, u), coeff(bd, s - u)));
        long t = acc;
        for (long i = 0; i < d; ++i) {
            c[i * lv + s] = t % ring.p();
            t /= ring.p();
        }
    }
    return RingElt(a.ring(), std::move(c));
}

RingElt RingElt::inv() const {
    if (!is_unit()) throw NonUnit();
    const auto& ring = *ring_;
    if (ring.mode() == RingMode::UnramifiedMixed) {
        RingElt z(ring_, ring.raw_inv(data_));
        return z;
    }
    // EqualChar: Newton in t from the inverted constant coefficient
    std::vector<int64_t> zd(ring.deg() * ring.level(), 0);
    long cinv = ring.residue_field().inv(residue());
    for (long i = 0; i < ring.deg(); ++i) {
        zd[i * ring.level()] = cinv % ring.p();
        cinv /= ring.p();
    }
    RingElt z(ring_, std::move(zd));
    for (long it = 0; it < ring.level() + 2; ++it) {
        RingElt e = ring.one() - z * (*this);
        if (e.is_zero()) break;
        z = z + z * e;
    }
    if (!(z * (*this) == ring.one())) throw std::logic_error("RingElt::inv failed");
    return z;
}

RingElt RingElt::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    RingElt r = ring_->one();
    RingElt b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bool RingElt::operator==(const RingElt& a) const {
    check_ring(*this, a);
    if (level() != a.level()) {
        long lv = std::min(level(), a.level());
        return reduce_to(lv) == a.reduce_to(lv);
    }
    return data_ == a.data_;
}

RingElt RingElt::frobenius() const {
    const auto& ring = *ring_;
    if (ring.width() != 2) throw std::invalid_argument("frobenius: width-2 ring required");
    if (ring.mode() == RingMode::EqualChar) {
        const auto& fq = ring.residue_field();
        long lv = ring.level();
        long d = ring.deg();
        std::vector<int64_t> c(d * lv, 0);
        for (long s = 0; s < lv; ++s) {
            long idx = 0;
            for (long i = d - 1; i >= 0; --i) idx = idx * ring.p() + data_[i * lv + s];
            long img = fq.pow_q(idx, ring.q());
            for (long i = 0; i < d; ++i) {
                c[i * lv + s] = img % ring.p();
                img /= ring.p();
            }
        }
        return RingElt(ring_, std::move(c));
    }
    std::vector<int64_t> cur = data_;
    for (long step = 0; step < ring.f(); ++step) cur = ring.raw_eval_frob_p(cur);
    return RingElt(ring_, std::move(cur));
}

bool RingElt::is_base(int slack) const {
    RingElt diff = *this - frobenius();
    if (slack <= 0) return diff.is_zero();
    return diff.valuation() >= level() - slack;
}

long RingElt::residue() const {
    const auto& ring = *ring_;
    long d = ring.deg();
    long idx = 0;
    if (ring.mode() == RingMode::UnramifiedMixed) {
        for (long i = d - 1; i >= 0; --i) idx = idx * ring.p() + data_[i] % ring.p();
    } else {
        long lv = ring.level();
        for (long i = d - 1; i >= 0; --i) idx = idx * ring.p() + data_[i * lv];
    }
    return idx;
}

long RingElt::valuation() const {
    const auto& ring = *ring_;
    if (is_zero()) return ring.level();
    if (ring.mode() == RingMode::UnramifiedMixed) {
        long v = 0;
        int64_t pk = ring.p();
        for (; v < ring.level(); ++v) {
            bool divisible = true;
            for (int64_t c : data_)
                if (c % pk != 0) {
                    divisible = false;
                    break;
                }
            if (!divisible) break;
            pk *= ring.p();
        }
        return v;
    }
    long lv = ring.level();
    for (long s = 0; s < lv; ++s)
        for (long i = 0; i < ring.deg(); ++i)
            if (data_[i * lv + s] != 0) return s;
    return lv;
}

RingElt RingElt::shift_down(long k) const {
    if (k == 0) return *this;
    const auto& ring = *ring_;
    if (valuation() < k) throw PrecisionError("shift_down: valuation too small");
    auto target = ring.at_level(ring.level() - k);
    if (ring.mode() == RingMode::UnramifiedMixed) {
        int64_t pk = pow_i64(ring.p(), k);
        std::vector<int64_t> c(ring.deg());
        for (long i = 0; i < ring.deg(); ++i) c[i] = (data_[i] / pk) % target->pj();
        return RingElt(target, std::move(c));
    }
    long lv = ring.level();
    long nlv = lv - k;
    std::vector<int64_t> c(ring.deg() * nlv, 0);
    for (long i = 0; i < ring.deg(); ++i)
        for (long s = 0; s < nlv; ++s) c[i * nlv + s] = data_[i * lv + s + k];
    return RingElt(target, std::move(c));
}

RingElt RingElt::reduce_to(long level) const {
    const auto& ring = *ring_;
    if (level == ring.level()) return *this;
    if (level > ring.level()) throw PrecisionError("reduce_to: cannot raise level");
    auto target = ring.at_level(level);
    if (ring.mode() == RingMode::UnramifiedMixed) {
        std::vector<int64_t> c(ring.deg());
        for (long i = 0; i < ring.deg(); ++i) c[i] = data_[i] % target->pj();
        return RingElt(target, std::move(c));
    }
    long lv = ring.level();
    std::vector<int64_t> c(ring.deg() * level, 0);
    for (long i = 0; i < ring.deg(); ++i)
        for (long s = 0; s < level; ++s) c[i * level + s] = data_[i * lv + s];
    return RingElt(target, std::move(c));
}

RingElt RingElt::lift_to(long level) const {
    if (level == ring_->level()) return *this;
    if (level < ring_->level()) return reduce_to(level);
    auto target = ring_->at_level(level);
    return from_digits(target, digits());
}

std::vector<long> RingElt::digits() const {
    const auto& ring = *ring_;
    std::vector<long> out;
    if (ring.mode() == RingMode::EqualChar) {
        long lv = ring.level();
        for (long s = 0; s < lv; ++s) {
            long idx = 0;
            for (long i = ring.deg() - 1; i >= 0; --i) idx = idx * ring.p() + data_[i * lv + s];
            out.push_back(idx);
        }
        return out;
    }
    RingElt cur = *this;
    for (long s = 0; s < ring.level(); ++s) {
        long r = cur.residue();
        out.push_back(r);
        RingElt t = cur.ring()->teichmuller(r);
        cur = cur - t;
        if (s + 1 < ring.level()) cur = cur.shift_down(1);
    }
    return out;
}

RingElt RingElt::from_digits(const std::shared_ptr<const TruncRing>& ring,
                             const std::vector<long>& digits) {
    if (ring->mode() == RingMode::EqualChar) {
        long lv = ring->level();
        std::vector<int64_t> c(ring->deg() * lv, 0);
        for (long s = 0; s < lv && s < static_cast<long>(digits.size()); ++s) {
            long t = digits[s];
            for (long i = 0; i < ring->deg(); ++i) {
                c[i * lv + s] = t % ring->p();
                t /= ring->p();
            }
        }
        return RingElt(ring, std::move(c));
    }
    RingElt acc = ring->zero();
    int64_t pk = 1;
    for (long s = 0; s < ring->level() && s < static_cast<long>(digits.size()); ++s) {
        if (digits[s] != 0) {
            RingElt t = ring->teichmuller(digits[s]);
            std::vector<int64_t> data = t.data();
            for (auto& v : data) v = v * pk % ring->pj();
            acc = acc + RingElt(ring, std::move(data));
        }
        pk *= ring->p();
    }
    return acc;
}

int64_t RingElt::absolute_trace() const {
    const auto& ring = *ring_;
    if (ring.mode() != RingMode::UnramifiedMixed)
        throw std::invalid_argument("absolute_trace: mixed mode only");
    std::vector<int64_t> sum(ring.deg(), 0);
    std::vector<int64_t> cur = data_;
    for (long i = 0; i < ring.deg(); ++i) {
        for (long k = 0; k < ring.deg(); ++k) sum[k] = (sum[k] + cur[k]) % ring.pj();
        cur = ring.raw_eval_frob_p(cur);
    }
    for (long i = 1; i < ring.deg(); ++i)
        if (sum[i] != 0) throw std::logic_error("absolute_trace: not in the prime ring");
    return sum[0];
}

std::string RingElt::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < data_.size(); ++i) {
        if (i) os << ",";
        os << data_[i];
    }
    os << "]@" << ring_->describe();
    return os.str();
}

// ---------------------------------------------------------------------------

RootOfUnity AdditivePsi0::eval(const RingElt& u, long val) {
    if (val >= 0) return RootOfUnity::one();
    long s = -val;
    const auto& ring = *u.ring();
    if (ring.level() < s) throw PrecisionError("psi0: element level below required depth");
    RingElt v = u.reduce_to(s);
    if (ring.width() == 2 && !v.is_base())
        throw std::invalid_argument("psi0: width-2 argument must be frobenius-fixed");
    if (ring.mode() == RingMode::UnramifiedMixed) {
        int64_t ps = pow_i64(ring.p(), s);
        int64_t t = v.absolute_trace() % ps;
        if (ring.width() == 2) {
            // the absolute trace double-counts through the quadratic layer
            int64_t inv2 = (ps + 1) / 2; // 2 * (ps+1)/2 = ps + 1 = 1 mod ps
            t = t * inv2 % ps;
        }
        return RootOfUnity::make(ps, t);
    }
    long a = v.digits()[s - 1];
    const auto& fq = ring.residue_field();
    long tr = fq.trace_to_fp(a);
    if (ring.width() == 2) {
        long inv2 = (ring.p() + 1) / 2;
        tr = tr * inv2 % ring.p();
    }
    return RootOfUnity::make(ring.p(), tr);
}

Cyc AdditivePsi0::eval_cyc(const RingElt& u, long val, const std::shared_ptr<const CycContext>& ctx) {
    return eval(u, val).to_cyc(ctx);
}

} // namespace toric
