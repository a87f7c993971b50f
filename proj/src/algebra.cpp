#include <fraxdim/algebra.hpp>
#include <fraxdim/error.hpp>

#include <cmath>
#include <sstream>

namespace fraxdim {

using Poly = std::vector<Rational>;  // low degree first

namespace {

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int deg(const Poly& p) { return static_cast<int>(p.size()) - 1; }

Rational eval(const Poly& p, const Rational& x) {
    Rational v = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
    return v;
}

Poly derivative(const Poly& p) {
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
    trim(d);
    return d;
}

// Remainder of a by b (b nonzero); optionally the quotient too.
Poly divmod(Poly a, const Poly& b, Poly* quot = nullptr) {
    trim(a);
    if (quot) quot->assign(a.size() > b.size() ? a.size() - b.size() + 1 : 1, Rational(0));
    while (deg(a) >= deg(b)) {
        Rational f = a.back() / b.back();
        int shift = deg(a) - deg(b);
        if (quot) (*quot)[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        a.pop_back();
        trim(a);
    }
    if (quot) trim(*quot);
    return a;
}

Poly sub(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

Poly gcd(Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = divmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

int sgn(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain{p, derivative(p)};
    while (!chain.back().empty()) {
        Poly r = divmod(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        if (r.empty()) break;
        chain.push_back(std::move(r));
    }
    if (chain.back().empty()) chain.pop_back();
    return chain;
}

int sign_changes(const std::vector<Poly>& chain, const Rational& x) {
    int changes = 0, last = 0;
    for (const auto& p : chain) {
        int s = sgn(eval(p, x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

// Distinct roots in (lo, hi].
int root_count(const std::vector<Poly>& chain, const Rational& lo, const Rational& hi) {
    return sign_changes(chain, lo) - sign_changes(chain, hi);
}

// Value range of p over [lo, hi] with 0 < lo.
std::pair<Rational, Rational> eval_interval(const Poly& p, const Rational& lo, const Rational& hi) {
    Rational vlo = 0, vhi = 0, plo = 1, phi = 1;
    for (const auto& c : p) {
        if (c >= 0) {
            vlo += c * plo;
            vhi += c * phi;
        } else {
            vlo += c * phi;
            vhi += c * plo;
        }
        plo *= lo;
        phi *= hi;
    }
    return {vlo, vhi};
}

}  // namespace

namespace detail {

struct FieldData {
    std::vector<Integer> minpoly;
    Poly minq;
    std::vector<Poly> chain;
    Rational lo, hi;  // beta in (lo, hi], or lo == hi == beta
    double beta_d = 0;
    std::vector<Poly> pos_pow, neg_pow;  // beta^k and beta^-k, k = 0..64

    // Shrink (lo, hi] around beta by one bisection step.
    void bisect(Rational& a, Rational& b) const {
        Rational mid = (a + b) / 2;
        if (eval(minq, mid) == 0 && root_count(chain, a, mid) == 1) {
            a = b = mid;
        } else if (root_count(chain, a, mid) == 1) {
            b = mid;
        } else {
            a = mid;
        }
    }
};

}  // namespace detail

namespace {

Poly reduce(Poly p, const Poly& m) {
    trim(p);
    int d = deg(m);
    for (int k = deg(p); k >= d; --k) {
        Rational c = p[k];
        if (c == 0) continue;
        for (int i = 0; i < d; ++i) p[k - d + i] -= c * m[i];
        p[k] = 0;
    }
    p.resize(d, Rational(0));
    return p;
}

Poly inverse_mod(const Poly& a, const Poly& m) {
    // Extended Euclid: track s with s*a == r (mod m).
    Poly r0 = m, r1 = a, s0{}, s1{Rational(1)};
    trim(r1);
    while (!r1.empty() && deg(r1) > 0) {
        Poly q;
        Poly r2 = divmod(r0, r1, &q);
        Poly s2 = sub(s0, mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r1.empty()) throw Error("DivisionByZero", "element is not invertible in this field");
    Rational c = r1[0];
    for (auto& x : s1) x /= c;
    return reduce(s1, m);
}

}  // namespace

PisotField PisotField::make(const std::vector<long long>& minpoly, const Rational& lo_in,
                            const Rational& hi_in) {
    if (minpoly.size() < 2) throw Error("SemanticError", "minimal polynomial must have degree >= 1");
    if (minpoly.back() != 1) throw Error("SemanticError", "minimal polynomial must be monic");
    if (!(lo_in < hi_in)) throw Error("SemanticError", "isolating interval needs lo < hi");

    auto d = std::make_shared<detail::FieldData>();
    for (long long c : minpoly) {
        d->minpoly.emplace_back(static_cast<long>(c));
        d->minq.emplace_back(Rational(Integer(static_cast<long>(c))));
    }
    d->chain = sturm_chain(d->minq);
    Rational lo = lo_in, hi = hi_in;

    // Accept a root sitting exactly on the lower end as well.
    if (eval(d->minq, lo) == 0) {
        lo -= (hi - lo);
    }
    int n = root_count(d->chain, lo, hi);
    if (n == 0)
        throw Error("NoRootInInterval", "no root of the minimal polynomial in the given interval");
    while (n > 1) {  // keep the largest root
        Rational mid = (lo + hi) / 2;
        int upper = root_count(d->chain, mid, hi);
        if (upper >= 1) {
            lo = mid;
            n = upper;
        } else {
            hi = mid;
            n = root_count(d->chain, lo, hi);
        }
    }
    if (eval(d->minq, hi) == 0) lo = hi;

    if (lo != hi) {
        Rational one(1);
        if (hi <= one) throw Error("RootNotGreaterThanOne", "isolated root is not greater than 1");
        if (lo < one) {
            if (eval(d->minq, one) == 0 || root_count(d->chain, one, hi) == 0)
                throw Error("RootNotGreaterThanOne", "isolated root is not greater than 1");
            lo = one;
        }
        const Rational eps = Rational(1, Integer(1) << 100);
        while (lo != hi && hi - lo > eps) d->bisect(lo, hi);
    } else if (lo <= 1) {
        throw Error("RootNotGreaterThanOne", "isolated root is not greater than 1");
    }
    d->lo = lo;
    d->hi = hi;
    d->beta_d = Rational((lo + hi) / 2).get_d();

    const int deg_f = static_cast<int>(minpoly.size()) - 1;
    Poly x(std::max(deg_f, 2), Rational(0));
    x[1] = 1;
    Poly one_p(deg_f, Rational(0));
    one_p[0] = 1;
    Poly xr = reduce(x, d->minq);
    Poly xinv = inverse_mod(xr, d->minq);
    d->pos_pow.push_back(one_p);
    d->neg_pow.push_back(one_p);
    for (int k = 1; k <= 64; ++k) {
        d->pos_pow.push_back(reduce(mul(d->pos_pow.back(), xr), d->minq));
        d->neg_pow.push_back(reduce(mul(d->neg_pow.back(), xinv), d->minq));
    }
    return PisotField(std::move(d));
}

PisotField PisotField::two() {
    static const PisotField f = make({-2, 1}, Rational(3, 2), Rational(5, 2));
    return f;
}

PisotField PisotField::golden() {
    static const PisotField f = make({-1, -1, 1}, Rational(1), Rational(2));
    return f;
}

int PisotField::degree() const { return static_cast<int>(d_->minpoly.size()) - 1; }
const std::vector<Integer>& PisotField::minpoly() const { return d_->minpoly; }
std::pair<Rational, Rational> PisotField::isolating_interval() const { return {d_->lo, d_->hi}; }
double PisotField::beta_approx() const { return d_->beta_d; }

bool PisotField::operator==(const PisotField& other) const {
    return d_ == other.d_ || d_->minpoly == other.d_->minpoly;
}

AlgebraicNumber PisotField::zero() const { return from_rational(0); }
AlgebraicNumber PisotField::one() const { return from_rational(1); }
AlgebraicNumber PisotField::beta() const { return beta_pow(1); }

AlgebraicNumber PisotField::from_rational(const Rational& q) const {
    std::vector<Rational> c(degree(), Rational(0));
    c[0] = q;
    return AlgebraicNumber(*this, std::move(c));
}

AlgebraicNumber PisotField::from_coeffs(std::vector<Rational> coeffs) const {
    return AlgebraicNumber(*this, std::move(coeffs));
}

AlgebraicNumber PisotField::beta_pow(int k) const {
    int a = k < 0 ? -k : k;
    if (a <= 64) return AlgebraicNumber(*this, k < 0 ? d_->neg_pow[a] : d_->pos_pow[a]);
    AlgebraicNumber base = beta_pow(k < 0 ? -64 : 64);
    return base * beta_pow(k < 0 ? k + 64 : k - 64);
}

std::string PisotField::describe() const {
    std::ostringstream os;
    os << "Q(beta), beta ~ " << beta_approx() << ", minpoly [";
    for (std::size_t i = 0; i < d_->minpoly.size(); ++i) os << (i ? "," : "") << d_->minpoly[i];
    os << "]";
    return os.str();
}

AlgebraicNumber::AlgebraicNumber(PisotField field, std::vector<Rational> coeffs)
    : field_(std::move(field)) {
    for (auto& c : coeffs) c.canonicalize();
    int d = field_.degree();
    if (static_cast<int>(coeffs.size()) > d)
        c_ = reduce(std::move(coeffs), field_.d_->minq);
    else {
        c_ = std::move(coeffs);
        c_.resize(d, Rational(0));
    }
}

void AlgebraicNumber::check_same(const AlgebraicNumber& o) const {
    if (field_ != o.field_) throw Error("FieldMismatch", "operands live in different fields");
}

bool AlgebraicNumber::is_zero() const {
    for (const auto& c : c_)
        if (c != 0) return false;
    return true;
}

bool AlgebraicNumber::is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

int AlgebraicNumber::sign() const {
    if (is_rational()) return sgn(c_[0]);
    const auto& fd = *field_.d_;
    if (fd.lo == fd.hi) return sgn(eval(c_, fd.lo));
    Rational lo = fd.lo, hi = fd.hi;
    for (int iter = 0; iter < 4000; ++iter) {
        if (lo == hi) return sgn(eval(c_, lo));
        auto [vlo, vhi] = eval_interval(c_, lo, hi);
        if (vlo > 0) return 1;
        if (vhi < 0) return -1;
        fd.bisect(lo, hi);
    }
    // Only reachable when the polynomial is reducible and shares the root.
    Poly g = gcd(c_, fd.minq);
    if (deg(g) >= 1 && root_count(sturm_chain(g), lo, hi) >= 1) return 0;
    throw Error("NoConvergence", "sign determination did not terminate");
}

double AlgebraicNumber::to_double(double tol) const {
    if (is_rational()) return c_[0].get_d();
    const auto& fd = *field_.d_;
    Rational lo = fd.lo, hi = fd.hi;
    Rational t(tol);
    for (int iter = 0; iter < 4000; ++iter) {
        if (lo == hi) return eval(c_, lo).get_d();
        auto [vlo, vhi] = eval_interval(c_, lo, hi);
        if (vhi - vlo < t) return Rational((vlo + vhi) / 2).get_d();
        fd.bisect(lo, hi);
    }
    throw Error("NoConvergence", "float refinement did not terminate");
}

double AlgebraicNumber::approx() const {
    double b = field_.d_->beta_d, v = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * b + it->get_d();
    return v;
}

AlgebraicNumber AlgebraicNumber::operator-() const {
    AlgebraicNumber r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

AlgebraicNumber& AlgebraicNumber::operator+=(const AlgebraicNumber& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

AlgebraicNumber& AlgebraicNumber::operator-=(const AlgebraicNumber& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

AlgebraicNumber& AlgebraicNumber::operator*=(const AlgebraicNumber& o) {
    check_same(o);
    if (c_.size() == 1) {
        c_[0] *= o.c_[0];
        return *this;
    }
    Poly p(2 * c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) p[i + j] += c_[i] * o.c_[j];
    }
    c_ = reduce(std::move(p), field_.d_->minq);
    return *this;
}

AlgebraicNumber& AlgebraicNumber::operator*=(const Rational& q) {
    for (auto& c : c_) c *= q;
    return *this;
}

AlgebraicNumber AlgebraicNumber::inverse() const {
    if (is_zero()) throw Error("DivisionByZero", "division by zero");
    if (c_.size() == 1) return AlgebraicNumber(field_, {Rational(1) / c_[0]});
    return AlgebraicNumber(field_, inverse_mod(c_, field_.d_->minq));
}

AlgebraicNumber& AlgebraicNumber::operator/=(const AlgebraicNumber& o) {
    check_same(o);
    return *this *= o.inverse();
}

bool AlgebraicNumber::operator==(const AlgebraicNumber& o) const {
    return field_ == o.field_ && c_ == o.c_;
}

std::strong_ordering AlgebraicNumber::operator<=>(const AlgebraicNumber& o) const {
    check_same(o);
    if (c_.size() == 1) {
        int c = cmp(c_[0], o.c_[0]);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    int s = (*this - o).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

int AlgebraicNumber::structural_compare(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    for (std::size_t i = 0; i < a.c_.size() && i < b.c_.size(); ++i) {
        int c = cmp(a.c_[i], b.c_[i]);
        if (c) return c < 0 ? -1 : 1;
    }
    return a.c_.size() < b.c_.size() ? -1 : (a.c_.size() > b.c_.size() ? 1 : 0);
}

std::size_t AlgebraicNumber::hash() const noexcept {
    std::size_t h = c_.size();
    for (const auto& c : c_) hash_combine(h, hash_value(c));
    return h;
}

std::string AlgebraicNumber::to_string() const {
    if (is_rational()) return c_[0].get_str();
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i].get_str();
    os << "]";
    return os.str();
}

}  // namespace fraxdim
