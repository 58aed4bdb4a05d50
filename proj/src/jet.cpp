#include "lwrt/jet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lwrt {

double factorial(int n) {
    static const auto table = [] {
        std::array<double, 171> t{};
        t[0] = 1.0;
        for (int i = 1; i < 171; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    if (n < 0 || n > 170) throw std::out_of_range("factorial argument out of range");
    return table[n];
}

Jet::Jet(int order, double value) : order_(order) {
    if (order < 0 || order > kMaxOrder) throw std::out_of_range("jet order out of range");
    c_[0] = value;
}

Jet Jet::variable(int order, double x0, double slope) {
    Jet j(order, x0);
    if (order >= 1) j.c_[1] = slope;
    return j;
}

double Jet::derivative(int n) const {
    if (n > order_) throw std::out_of_range("jet derivative beyond order");
    return c_[n] * factorial(n);
}

Jet Jet::derivative_jet() const {
    Jet d(std::max(order_ - 1, 0));
    if (order_ == 0) return d;
    for (int n = 0; n < order_; ++n) d.c_[n] = (n + 1) * c_[n + 1];
    return d;
}

Jet Jet::truncated(int order) const {
    Jet t(std::min(order, order_));
    for (int n = 0; n <= t.order_; ++n) t.c_[n] = c_[n];
    return t;
}

double Jet::max_abs() const {
    double m = 0.0;
    for (int n = 0; n <= order_; ++n) m = std::max(m, std::abs(c_[n]));
    return m;
}

Jet& Jet::operator+=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int n = 0; n <= order_; ++n) c_[n] += o.c_[n];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int n = 0; n <= order_; ++n) c_[n] -= o.c_[n];
    return *this;
}

Jet& Jet::operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
}

Jet& Jet::operator/=(const Jet& o) {
    *this = *this / o;
    return *this;
}

Jet& Jet::operator+=(double s) {
    c_[0] += s;
    return *this;
}

Jet& Jet::operator-=(double s) {
    c_[0] -= s;
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (int n = 0; n <= order_; ++n) c_[n] *= s;
    return *this;
}

Jet& Jet::operator/=(double s) {
    for (int n = 0; n <= order_; ++n) c_[n] /= s;
    return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a -= s; }
Jet operator-(double s, const Jet& a) { return (-a) + s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator/(Jet a, double s) { return a /= s; }

Jet operator-(const Jet& a) {
    Jet r = a;
    r *= -1.0;
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    const int order = std::min(a.order(), b.order());
    Jet r(order);
    for (int n = 0; n <= order; ++n) {
        double s = 0.0;
        for (int j = 0; j <= n; ++j) s += a[j] * b[n - j];
        r[n] = s;
    }
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    const int order = std::min(a.order(), b.order());
    Jet q(order);
    const double b0 = b[0];
    for (int n = 0; n <= order; ++n) {
        double s = a[n];
        for (int j = 1; j <= n; ++j) s -= b[j] * q[n - j];
        q[n] = s / b0;
    }
    return q;
}

Jet operator/(double s, const Jet& a) { return Jet(a.order(), s) / a; }

Jet exp(const Jet& a) {
    Jet e(a.order(), std::exp(a[0]));
    for (int n = 1; n <= a.order(); ++n) {
        double s = 0.0;
        for (int j = 1; j <= n; ++j) s += j * a[j] * e[n - j];
        e[n] = s / n;
    }
    return e;
}

Jet log(const Jet& a) {
    Jet l(a.order(), std::log(a[0]));
    for (int n = 1; n <= a.order(); ++n) {
        double s = 0.0;
        for (int j = 1; j < n; ++j) s += j * l[j] * a[n - j];
        l[n] = (a[n] - s / n) / a[0];
    }
    return l;
}

namespace {

void sincos_jet(const Jet& a, Jet& s, Jet& c) {
    s = Jet(a.order(), std::sin(a[0]));
    c = Jet(a.order(), std::cos(a[0]));
    for (int n = 1; n <= a.order(); ++n) {
        double ss = 0.0, cc = 0.0;
        for (int j = 1; j <= n; ++j) {
            ss += j * a[j] * c[n - j];
            cc += j * a[j] * s[n - j];
        }
        s[n] = ss / n;
        c[n] = -cc / n;
    }
}

}  // namespace

Jet sin(const Jet& a) {
    Jet s, c;
    sincos_jet(a, s, c);
    return s;
}

Jet cos(const Jet& a) {
    Jet s, c;
    sincos_jet(a, s, c);
    return c;
}

Jet pow(const Jet& a, double r) {
    Jet p(a.order(), std::pow(a[0], r));
    for (int n = 1; n <= a.order(); ++n) {
        double s = 0.0;
        for (int j = 1; j <= n; ++j) s += ((r + 1.0) * j - n) * a[j] * p[n - j];
        p[n] = s / (n * a[0]);
    }
    return p;
}

Jet sqrt(const Jet& a) { return pow(a, 0.5); }

Jet pow(const Jet& a, int n) {
    if (n < 0) return 1.0 / pow(a, -n);
    Jet result(a.order(), 1.0);
    Jet base = a;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

}  // namespace lwrt
