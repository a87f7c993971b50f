#pragma once

#include <fraxdim/rational.hpp>

#include <compare>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace fraxdim {

class AlgebraicNumber;

namespace detail {
struct FieldData;
}

// Real field Q(beta) for a real root beta > 1 of a monic integer polynomial.
// Handles are cheap to copy and compare; the data behind them is immutable.
class PisotField {
public:
    // minpoly lists coefficients from the constant term up; the leading one must be 1.
    static PisotField make(const std::vector<long long>& minpoly, const Rational& lo,
                           const Rational& hi);
    static PisotField two();
    static PisotField golden();

    int degree() const;
    const std::vector<Integer>& minpoly() const;
    std::pair<Rational, Rational> isolating_interval() const;
    double beta_approx() const;

    AlgebraicNumber zero() const;
    AlgebraicNumber one() const;
    AlgebraicNumber beta() const;
    AlgebraicNumber from_rational(const Rational& q) const;
    AlgebraicNumber from_coeffs(std::vector<Rational> coeffs) const;
    // beta^k for any integer k (cached for |k| <= 64).
    AlgebraicNumber beta_pow(int k) const;

    std::string describe() const;

    bool operator==(const PisotField& other) const;
    bool operator!=(const PisotField& other) const { return !(*this == other); }

private:
    friend class AlgebraicNumber;
    explicit PisotField(std::shared_ptr<const detail::FieldData> d) : d_(std::move(d)) {}
    std::shared_ptr<const detail::FieldData> d_;
};

// c0 + c1 beta + ... + c_{d-1} beta^{d-1}, always reduced, so == is value equality.
class AlgebraicNumber {
public:
    AlgebraicNumber(PisotField field, std::vector<Rational> coeffs);

    const PisotField& field() const { return field_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_rational() const;
    // -1, 0 or +1, exact.
    int sign() const;
    double to_double(double tol = 1e-12) const;
    // Plain double evaluation at the cached beta; for rendering and bucketing only.
    double approx() const;

    AlgebraicNumber operator-() const;
    AlgebraicNumber& operator+=(const AlgebraicNumber& o);
    AlgebraicNumber& operator-=(const AlgebraicNumber& o);
    AlgebraicNumber& operator*=(const AlgebraicNumber& o);
    AlgebraicNumber& operator/=(const AlgebraicNumber& o);
    AlgebraicNumber& operator*=(const Rational& q);
    AlgebraicNumber inverse() const;

    friend AlgebraicNumber operator+(AlgebraicNumber a, const AlgebraicNumber& b) { return a += b; }
    friend AlgebraicNumber operator-(AlgebraicNumber a, const AlgebraicNumber& b) { return a -= b; }
    friend AlgebraicNumber operator*(AlgebraicNumber a, const AlgebraicNumber& b) { return a *= b; }
    friend AlgebraicNumber operator/(AlgebraicNumber a, const AlgebraicNumber& b) { return a /= b; }
    friend AlgebraicNumber operator*(AlgebraicNumber a, const Rational& q) { return a *= q; }

    bool operator==(const AlgebraicNumber& o) const;
    bool operator!=(const AlgebraicNumber& o) const { return !(*this == o); }
    // Order of the real values.
    std::strong_ordering operator<=>(const AlgebraicNumber& o) const;
    // Structural order on coefficient vectors; any total order usable for sorting keys.
    static int structural_compare(const AlgebraicNumber& a, const AlgebraicNumber& b);

    std::size_t hash() const noexcept;
    std::string to_string() const;

private:
    void check_same(const AlgebraicNumber& o) const;
    PisotField field_;
    std::vector<Rational> c_;
};

enum class Sign { negative = -1, zero = 0, positive = 1 };
inline Sign an_sign(const AlgebraicNumber& a) { return static_cast<Sign>(a.sign()); }

}  // namespace fraxdim
