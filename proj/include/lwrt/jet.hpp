#pragma once

#include <array>
#include <cstddef>

namespace lwrt {

// Truncated Taylor series in one variable: c[n] = f^(n)(x0)/n!, n <= order.
class Jet {
public:
    static constexpr int kMaxOrder = 31;

    Jet() = default;
    explicit Jet(int order, double value = 0.0);

    static Jet constant(int order, double value) { return Jet(order, value); }
    // The independent variable expanded at x0.
    static Jet variable(int order, double x0, double slope = 1.0);

    int order() const { return order_; }
    double value() const { return c_[0]; }
    double operator[](int n) const { return c_[n]; }
    double& operator[](int n) { return c_[n]; }

    // n-th derivative at the expansion point.
    double derivative(int n) const;
    // Taylor jet of f' with order reduced by one.
    Jet derivative_jet() const;
    Jet truncated(int order) const;
    double max_abs() const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator/=(const Jet& o);
    Jet& operator+=(double s);
    Jet& operator-=(double s);
    Jet& operator*=(double s);
    Jet& operator/=(double s);

private:
    int order_ = 0;
    std::array<double, kMaxOrder + 1> c_{};
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& a);
Jet operator-(const Jet& a);

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double r);
Jet pow(const Jet& a, int n);

double factorial(int n);

}  // namespace lwrt
