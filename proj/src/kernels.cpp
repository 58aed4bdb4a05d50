#include "lwrt/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "lwrt/quadrature.hpp"

namespace lwrt {

KernelJet zero_kernel(int max_order) {
    return {[](double, double, double, int order) { return Jet(order, 0.0); }, max_order, 0};
}

KernelJet constant_kernel(double value, int max_order) {
    return {[value](double, double, double, int order) { return Jet(order, value); }, max_order, 0};
}

KernelJet xi_derivative(const KernelJet& s) {
    if (s.max_order < 1) throw std::invalid_argument("xi_derivative: kernel has no jet order left");
    return {[s](double xi, double eta, double etap, int order) { return s(xi, eta, etap, order + 1).derivative_jet(); },
            s.max_order - 1, s.factor_exponent};
}

KernelJet kernel_sum(const std::vector<std::pair<double, KernelJet>>& terms) {
    int order = Jet::kMaxOrder, factor = 1 << 20;
    for (const auto& [c, k] : terms) {
        order = std::min(order, k.max_order);
        factor = std::min(factor, k.factor_exponent);
    }
    if (terms.empty()) return zero_kernel(Jet::kMaxOrder);
    return {[terms](double xi, double eta, double etap, int ord) {
                Jet s(ord, 0.0);
                for (const auto& [c, k] : terms) {
                    Jet t = k(xi, eta, etap, ord);
                    t *= c;
                    s += t;
                }
                return s;
            },
            order, factor};
}

KernelJet compose(const KernelJet& P, const KernelJet& Q, int gauss_points) {
    const GaussRule& rule = gauss_legendre(gauss_points);
    return {[P, Q, &rule](double xi, double eta, double etap, int order) {
                Jet r(order, 0.0);
                const double d = eta - etap;
                if (d == 0.0) return r;
                for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                    const double u = 0.5 * (rule.nodes[q] + 1.0);
                    const double v = etap + u * d;
                    Jet t = P(xi, eta, v, order) * Q(xi, v, etap, order);
                    t *= 0.5 * rule.weights[q] * d;
                    r += t;
                }
                return r;
            },
            std::min(P.max_order, Q.max_order), P.factor_exponent + Q.factor_exponent + 1};
}

namespace {

// exp(-int_{etap}^{eta} a(xi, t) dt) as a xi-jet.
Jet psi_direct(const AnalyticField& a, double xi, double eta, double etap, int order) {
    if (auto c = a.constant_value()) return Jet(order, std::exp(-*c * (eta - etap)));
    if (eta == etap) return Jet(order, 1.0);
    auto integrand = [&](double t) { return a.jet(xi, t, order); };
    auto res = adaptive_integrate<Jet>(integrand, etap, eta, 1e-14, 1e-13);
    if (!res.converged) throw NumericError("base_kernels: antiderivative quadrature did not converge");
    return exp(-res.value);
}

}  // namespace

BaseKernels base_kernels(const AnalyticField& a, const AnalyticField& b, double gamma, int max_order) {
    if (max_order > std::min(a.jet_order(), b.jet_order()))
        throw std::invalid_argument("base_kernels: requested order exceeds field jet_order");
    BaseKernels base;
    base.a = a;
    base.b = b;
    base.gamma = gamma;
    base.max_order = max_order;
    base.P = {[a](double xi, double eta, double etap, int order) { return psi_direct(a, xi, eta, etap, order); },
              max_order, 0};
    base.Q = {[a, b](double xi, double eta, double etap, int order) {
                  return -(b.jet(xi, etap, order) * psi_direct(a, xi, eta, etap, order));
              },
              max_order, 0};
    base.Q1 = {[a, b](double xi, double eta, double etap, int order) {
                   const Jet p = psi_direct(a, xi, eta, etap, order + 1);
                   return -(b.jet(xi, etap, order) * p.truncated(order)) - p.derivative_jet();
               },
               max_order - 1, 0};
    return base;
}

AntiderivativeTable::AntiderivativeTable(const AnalyticField& a, double xi, double lower, double upper, int order,
                                         int degree)
    : lower_(lower), order_(order) {
    if (auto c = a.constant_value()) {
        constant_ = true;
        constant_value_ = *c;
        return;
    }
    grid_ = ChebyshevInterpolant(lower, upper, degree);
    const auto& nodes = grid_.nodes();
    values_.assign(nodes.size(), Jet(order, 0.0));
    auto integrand = [&](double t) { return a.jet(xi, t, order); };
    Jet acc(order, 0.0);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        auto res = adaptive_integrate<Jet>(integrand, nodes[i - 1], nodes[i], 1e-15, 1e-14);
        if (!res.converged) throw NumericError("kernel rows: antiderivative quadrature did not converge");
        acc += res.value;
        values_[i] = acc;
    }
}

Jet AntiderivativeTable::operator()(double eta) const {
    if (constant_) return Jet(order_, constant_value_ * (eta - lower_));
    return grid_.evaluate(values_, eta);
}

KernelRows::KernelRows(const BaseKernels& base, double xi, double anchor, double lower, int levels, int final_order,
                       const KernelRowOptions& options)
    : levels_(levels), final_order_(final_order), xi_(xi), anchor_(anchor), lower_(lower) {
    if (levels < 1) throw std::invalid_argument("KernelRows: levels must be >= 1");
    if (!(anchor > lower)) throw std::invalid_argument("KernelRows: anchor must exceed lower limit");
    const int top_order = order_at(1) + 1;
    if (top_order > base.max_order)
        throw std::invalid_argument("sjk_family: needs jet order " + std::to_string(top_order) +
                                    " but base kernels carry " + std::to_string(base.max_order));
    grid_ = ChebyshevInterpolant(lower, anchor, options.chebyshev_degree);
    const auto& nodes = grid_.nodes();
    const std::size_t n = nodes.size();
    const AntiderivativeTable A(base.a, xi, lower, anchor, top_order, options.antiderivative_degree);

    std::vector<Jet> A_nodes(n), b_nodes(n);
    for (std::size_t i = 0; i < n; ++i) {
        A_nodes[i] = A(nodes[i]);
        b_nodes[i] = base.b.jet(xi, nodes[i], top_order);
    }
    const Jet A_anchor = A(anchor);

    rows_.assign(levels + 1, {});
    // Level 1: s_{0,1} = q1, s_{1,1} = p.
    {
        const int o = order_at(1);
        rows_[1].assign(2, std::vector<Jet>(n, Jet(o, 0.0)));
        for (std::size_t i = 0; i < n; ++i) {
            const Jet p = exp(A_nodes[i] - A_anchor);  // order o + 1
            rows_[1][1][i] = p.truncated(o);
            rows_[1][0][i] = -(b_nodes[i].truncated(o) * p.truncated(o)) - p.derivative_jet();
        }
    }

    const GaussRule& rule = gauss_legendre(options.gauss_points);
    std::vector<double> card;
    for (int l = 1; l < levels; ++l) {
        const int o_next = order_at(l + 1);
        const int o_p = order_at(l);  // p needed at o_next + 1 for q1
        rows_[l + 1].assign(l + 2, std::vector<Jet>(n, Jet(o_next, 0.0)));
        std::vector<Jet> R(l + 1), dR(l + 1);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = nodes[i];
            const double len = anchor - v;
            if (len <= 0.0) continue;
            const Jet b_v = b_nodes[i].truncated(o_next);
            const Jet A_v = A_nodes[i].truncated(o_p);
            std::vector<Jet> acc(l + 2, Jet(o_next, 0.0));
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double t = v + 0.5 * (rule.nodes[q] + 1.0) * len;
                const double w = 0.5 * rule.weights[q] * len;
                const Jet p_full = exp(A_v - A(t).truncated(o_p));  // p(t, v), order o_p
                const Jet p = p_full.truncated(o_next);
                const Jet q1 = -(b_v * p) - p_full.derivative_jet();
                grid_.cardinal(t, card);
                for (int j = 0; j <= l; ++j) {
                    Jet r(o_p, 0.0);
                    const auto& tab = rows_[l][j];
                    for (std::size_t m = 0; m < n; ++m) {
                        if (card[m] == 0.0) continue;
                        Jet term = tab[m];
                        term *= card[m];
                        r += term;
                    }
                    R[j] = r.truncated(o_next);
                    dR[j] = r.derivative_jet();
                }
                for (int j = 0; j <= l + 1; ++j) {
                    Jet term(o_next, 0.0);
                    if (j <= l) term += R[j] * q1 - dR[j] * p;
                    if (j >= 1) term += R[j - 1] * p;
                    term *= w;
                    acc[j] += term;
                }
            }
            for (int j = 0; j <= l + 1; ++j) rows_[l + 1][j][i] = acc[j];
        }
    }
}

Jet KernelRows::row(int j, int level, double etap) const {
    if (level < 1 || level > levels_) throw std::out_of_range("KernelRows: level out of range");
    if (j < 0 || j > level) return Jet(order_at(level), 0.0);
    const double slack = 1e-12 * std::max(1.0, anchor_ - lower_);
    if (etap < lower_ - slack || etap > anchor_ + slack) throw std::out_of_range("KernelRows: eta' outside row range");
    return grid_.evaluate(table(j, level), std::clamp(etap, lower_, anchor_));
}

namespace {

// Cache of row tables keyed by (xi, anchor, lower, order) shared by the members of one family.
class RowCache {
public:
    RowCache(BaseKernels base, int levels) : base_(std::move(base)), levels_(levels) {}

    std::shared_ptr<const KernelRows> get(double xi, double anchor, double lower, int final_order) {
        const auto key = std::make_tuple(xi, anchor, lower, final_order);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = map_.find(key);
            if (it != map_.end()) return it->second;
        }
        auto rows = std::make_shared<const KernelRows>(base_, xi, anchor, lower, levels_, final_order);
        std::lock_guard<std::mutex> lock(mutex_);
        if (map_.size() >= 64) {
            map_.erase(order_.front());
            order_.pop_front();
        }
        if (map_.emplace(key, rows).second) order_.push_back(key);
        return rows;
    }

    const BaseKernels& base() const { return base_; }

private:
    using Key = std::tuple<double, double, double, int>;
    BaseKernels base_;
    int levels_;
    std::mutex mutex_;
    std::map<Key, std::shared_ptr<const KernelRows>> map_;
    std::list<Key> order_;
};

}  // namespace

SjkFamily sjk_family(const BaseKernels& base, int k, int k_max) {
    if (k < 1) throw std::invalid_argument("sjk_family: k must be >= 1");
    if (k > k_max) throw std::invalid_argument("sjk_family: k=" + std::to_string(k) + " exceeds k_max=" +
                                               std::to_string(k_max));
    if (base.max_order < k) throw std::invalid_argument("sjk_family: insufficient jet order in base kernels");
    SjkFamily fam;
    fam.k = k;
    if (k == 1) {
        fam.S = {base.Q1, base.P};
        return fam;
    }
    auto cache = std::make_shared<RowCache>(base, k);
    const double gamma = base.gamma;
    const int max_order = base.max_order - k;
    for (int j = 0; j <= k; ++j) {
        KernelJet s;
        s.max_order = max_order;
        s.factor_exponent = k - 1;
        s.evaluator = [cache, j, k, gamma](double xi, double eta, double etap, int order) {
            if (etap >= eta) return Jet(order, 0.0);
            const double lower = std::min(etap, -gamma);
            auto rows = cache->get(xi, eta, lower, order);
            return rows->row(j, k, etap);
        };
        fam.S.push_back(std::move(s));
    }
    return fam;
}

SjkFamily sjk_family_nested(const BaseKernels& base, int k, int gauss_points) {
    if (k < 1) throw std::invalid_argument("sjk_family_nested: k must be >= 1");
    std::vector<KernelJet> level = {base.Q1, base.P};
    for (int l = 1; l < k; ++l) {
        std::vector<KernelJet> next;
        for (int j = 0; j <= l + 1; ++j) {
            std::vector<std::pair<double, KernelJet>> terms;
            if (j <= l) {
                terms.emplace_back(1.0, compose(level[j], base.Q1, gauss_points));
                terms.emplace_back(-1.0, compose(xi_derivative(level[j]), base.P, gauss_points));
            }
            if (j >= 1) terms.emplace_back(1.0, compose(level[j - 1], base.P, gauss_points));
            next.push_back(kernel_sum(terms));
        }
        level = std::move(next);
    }
    SjkFamily fam;
    fam.k = k;
    fam.S = std::move(level);
    return fam;
}

double certify_base_constant(const BaseKernels& base, const std::vector<KernelSample>& samples, int n_max) {
    double C = 0.0;
    for (const auto& s : samples) {
        const Jet p = base.P(s.xi, s.eta, s.etap, n_max + 1);
        const Jet q = base.Q(s.xi, s.eta, s.etap, n_max);
        const Jet q1 = -(base.b.jet(s.xi, s.etap, n_max) * p.truncated(n_max)) - p.derivative_jet();
        for (int n = 0; n <= n_max; ++n) {
            // Taylor coefficients are d^n / n! already.
            const double m = std::max({std::abs(p[n]), std::abs(q[n]), std::abs(q1[n])});
            if (m > 0.0) C = std::max(C, std::pow(m, 1.0 / (n + 1)));
        }
    }
    return C;
}

KernelBoundReport verify_kernel_bounds(const BaseKernels& base, int k_max, double C, double beta,
                                       const std::vector<KernelSample>& samples) {
    KernelBoundReport rep;
    rep.C = C;
    rep.beta = beta;
    rep.ratio.assign(k_max, {});
    for (int k = 1; k <= k_max; ++k) rep.ratio[k - 1].assign(k + 1, 0.0);
    for (const auto& s : samples) {
        if (!(s.eta > s.etap)) continue;
        const KernelRows rows(base, s.xi, s.eta, std::min(s.etap, -base.gamma), k_max);
        const double d = s.eta - s.etap;
        for (int k = 1; k <= k_max; ++k) {
            for (int j = 0; j <= k; ++j) {
                const double v = std::abs(rows.row_value(j, k, s.etap));
                const double bound =
                    std::pow(beta * C, 2 * k - j) * factorial(k - j) * std::pow(d, k - 1) / factorial(k - 1);
                const double r = v / bound;
                rep.ratio[k - 1][j] = std::max(rep.ratio[k - 1][j], r);
                rep.max_ratio = std::max(rep.max_ratio, r);
            }
        }
    }
    return rep;
}

double apply_kernel(const KernelJet& S, const Sinogram& g, double xi, double eta, double gamma, int points) {
    if (!g.xi.contains(xi)) throw std::out_of_range("apply_kernel: xi outside grid");
    if (eta > g.eta.max + 1e-12 * (g.eta.max - g.eta.min)) throw std::out_of_range("apply_kernel: eta above grid");
    // Data are taken to vanish below -gamma.
    const double lower = std::max(g.eta.min, -gamma);
    return eta_line_integral(g, xi, lower, eta, [&](double e) { return S.value(xi, eta, e); }, points, 8);
}

double commutator_check(const AnalyticField& a, const AnalyticField& b, const std::function<double(double, double)>& g,
                        const std::vector<std::array<double, 2>>& points, double h) {
    static const double d1[5] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
    auto d_xi = [&](const std::function<double(double, double)>& u, double xi, double eta) {
        double s = 0.0;
        for (int i = 0; i < 5; ++i) s += d1[i] * u(xi + (i - 2) * h, eta);
        return s / h;
    };
    auto d_eta = [&](const std::function<double(double, double)>& u, double xi, double eta) {
        double s = 0.0;
        for (int i = 0; i < 5; ++i) s += d1[i] * u(xi, eta + (i - 2) * h);
        return s / h;
    };
    const std::function<double(double, double)> Db_g = [&](double xi, double eta) {
        return d_xi(g, xi, eta) - b.value(xi, eta) * g(xi, eta);
    };
    const std::function<double(double, double)> Da_g = [&](double xi, double eta) {
        return d_eta(g, xi, eta) + a.value(xi, eta) * g(xi, eta);
    };
    const std::function<double(double, double)> b_fn = [&](double xi, double eta) { return b.value(xi, eta); };
    double worst = 0.0;
    for (const auto& [xi, eta] : points) {
        const double DaDb = d_eta(Db_g, xi, eta) + a.value(xi, eta) * Db_g(xi, eta);
        const double DbDa = d_xi(Da_g, xi, eta) - b.value(xi, eta) * Da_g(xi, eta);
        const double a_xi = a.jet(xi, eta, 1)[1];
        const double b_eta = d_eta(b_fn, xi, eta);
        worst = std::max(worst, std::abs(DaDb - DbDa + g(xi, eta) * (b_eta + a_xi)));
    }
    return worst;
}

}  // namespace lwrt
