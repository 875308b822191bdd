#include "ewd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ewd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_cloud(const PointCloud& c) {
    if (c.points.empty() || c.points.size() != c.weights.size()) {
        throw std::invalid_argument("PointCloud: points/weights size mismatch");
    }
    double total = 0.0;
    for (double w : c.weights) {
        if (w < 0.0) throw std::invalid_argument("PointCloud: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("PointCloud: weights must sum to 1");
    }
}

bool is_uniform(const PointCloud& c) {
    const double u = 1.0 / static_cast<double>(c.weights.size());
    for (double w : c.weights) {
        if (std::abs(w - u) > 1e-12) return false;
    }
    return true;
}

// Shortest-augmenting-path assignment (rows <= cols), returns min total cost.
double hungarian_min_cost(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(a[0].size());
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> match(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    double cost = 0.0;
    for (int j = 1; j <= m; ++j) {
        if (match[j] != 0) cost += a[match[j] - 1][j - 1];
    }
    return cost;
}

// Transportation simplex (northwest-corner start, MODI improvement).
// Exact for small instances; the basis is a spanning tree of the bipartite
// supply/demand graph, so adding one nonbasic cell creates a unique cycle.
class TransportSimplex {
  public:
    TransportSimplex(std::vector<double> supply, std::vector<double> demand,
                     const std::vector<std::vector<double>>& cost)
        : supply_(std::move(supply)), demand_(std::move(demand)), cost_(cost),
          n_(static_cast<int>(supply_.size())), m_(static_cast<int>(demand_.size())),
          flow_(n_, std::vector<double>(m_, 0.0)),
          basic_(n_, std::vector<char>(m_, 0)) {}

    double solve() {
        northwest_corner();
        const int max_iters = 100 * (n_ + m_) * (n_ + m_);
        for (int iter = 0; iter < max_iters; ++iter) {
            compute_potentials();
            int bi = -1, bj = -1;
            double best = -1e-11;
            for (int i = 0; i < n_; ++i) {
                for (int j = 0; j < m_; ++j) {
                    if (basic_[i][j]) continue;
                    const double red = cost_[i][j] - u_[i] - v_[j];
                    if (red < best) {
                        best = red;
                        bi = i;
                        bj = j;
                    }
                }
            }
            if (bi < 0) {  // no improving cell: optimal
                double total = 0.0;
                for (int i = 0; i < n_; ++i) {
                    for (int j = 0; j < m_; ++j) total += flow_[i][j] * cost_[i][j];
                }
                return total;
            }
            pivot(bi, bj);
        }
        throw std::runtime_error("discrete_ot: transport simplex failed to converge");
    }

  private:
    void northwest_corner() {
        std::vector<double> s = supply_, d = demand_;
        int i = 0, j = 0;
        // Staircase of exactly n + m - 1 basic cells (tree), degenerate
        // zero flows allowed.
        while (true) {
            const double q = std::min(s[i], d[j]);
            flow_[i][j] = q;
            basic_[i][j] = 1;
            s[i] -= q;
            d[j] -= q;
            if (i == n_ - 1 && j == m_ - 1) break;
            if (j == m_ - 1) {
                ++i;
            } else if (i == n_ - 1) {
                ++j;
            } else if (s[i] <= d[j]) {
                ++i;
            } else {
                ++j;
            }
        }
    }

    void compute_potentials() {
        u_.assign(n_, kInf);
        v_.assign(m_, kInf);
        u_[0] = 0.0;
        for (int round = 0; round < n_ + m_; ++round) {
            bool changed = false;
            for (int i = 0; i < n_; ++i) {
                for (int j = 0; j < m_; ++j) {
                    if (!basic_[i][j]) continue;
                    if (u_[i] != kInf && v_[j] == kInf) {
                        v_[j] = cost_[i][j] - u_[i];
                        changed = true;
                    } else if (v_[j] != kInf && u_[i] == kInf) {
                        u_[i] = cost_[i][j] - v_[j];
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
    }

    // Path row si -> col sj through the basis tree (BFS over nodes
    // {rows} U {cols}); prepending the entering cell closes the cycle.
    std::vector<std::pair<int, int>> find_cycle(int si, int sj) {
        const int total = n_ + m_;
        std::vector<int> parent(total, -1), parent_cell_row(total, -1), parent_cell_col(total, -1);
        std::vector<char> seen(total, 0);
        std::vector<int> queue{si};
        seen[si] = 1;
        for (size_t head = 0; head < queue.size(); ++head) {
            const int node = queue[head];
            if (node < n_) {
                const int i = node;
                for (int j = 0; j < m_; ++j) {
                    if (!basic_[i][j] || seen[n_ + j]) continue;
                    seen[n_ + j] = 1;
                    parent[n_ + j] = node;
                    parent_cell_row[n_ + j] = i;
                    parent_cell_col[n_ + j] = j;
                    queue.push_back(n_ + j);
                }
            } else {
                const int j = node - n_;
                for (int i = 0; i < n_; ++i) {
                    if (!basic_[i][j] || seen[i]) continue;
                    seen[i] = 1;
                    parent[i] = node;
                    parent_cell_row[i] = i;
                    parent_cell_col[i] = j;
                    queue.push_back(i);
                }
            }
        }
        if (!seen[n_ + sj]) {
            throw std::runtime_error("discrete_ot: transport basis lost tree structure");
        }
        std::vector<std::pair<int, int>> cycle{{si, sj}};
        for (int node = n_ + sj; node != si; node = parent[node]) {
            cycle.push_back({parent_cell_row[node], parent_cell_col[node]});
        }
        return cycle;  // even length; alternates +/- starting at the entering cell
    }

    void pivot(int si, int sj) {
        const auto cycle = find_cycle(si, sj);
        double theta = kInf;
        size_t leave = 1;
        for (size_t t = 1; t < cycle.size(); t += 2) {
            const auto [i, j] = cycle[t];
            if (flow_[i][j] < theta) {
                theta = flow_[i][j];
                leave = t;
            }
        }
        for (size_t t = 0; t < cycle.size(); ++t) {
            const auto [i, j] = cycle[t];
            flow_[i][j] += (t % 2 == 0) ? theta : -theta;
        }
        basic_[si][sj] = 1;
        const auto [li, lj] = cycle[leave];
        basic_[li][lj] = 0;
        flow_[li][lj] = 0.0;
    }

    std::vector<double> supply_, demand_, u_, v_;
    std::vector<std::vector<double>> cost_;
    int n_, m_;
    std::vector<std::vector<double>> flow_;
    std::vector<std::vector<char>> basic_;
};

}  // namespace

PointCloud uniform_edge_cloud(const DirectedEdge& e, int atoms) {
    if (atoms < 1) throw std::invalid_argument("uniform_edge_cloud: need at least one atom");
    PointCloud c;
    c.points.reserve(atoms);
    c.weights.assign(atoms, 1.0 / atoms);
    const Vec2 mid = e.center();
    const Vec2 half = 0.5 * e.vec();
    for (int i = 0; i < atoms; ++i) {
        const double x = -1.0 + (2.0 * i + 1.0) / atoms;  // midpoint of subinterval
        c.points.push_back(mid + x * half);
    }
    return c;
}

void sym_eigen_2x2(const Mat2& m, double eval[2], Vec2 evec[2]) {
    const double t = 0.5 * (m.m00 + m.m11);
    const double off = 0.5 * (m.m01 + m.m10);
    const double d = 0.5 * (m.m00 - m.m11);
    const double r = std::sqrt(d * d + off * off);
    eval[0] = t - r;
    eval[1] = t + r;
    if (r < 1e-300) {
        evec[0] = {1.0, 0.0};
        evec[1] = {0.0, 1.0};
        return;
    }
    // Eigenvector for the larger eigenvalue.
    Vec2 hi;
    if (d >= 0.0) {
        hi = {d + r, off};
    } else {
        hi = {off, r - d};
    }
    const double n = norm(hi);
    hi = (n > 0.0) ? (1.0 / n) * hi : Vec2{1.0, 0.0};
    evec[1] = hi;
    evec[0] = {-hi.y, hi.x};
}

namespace {

Mat2 sqrtm_eigen(const Mat2& m) {
    double ev[2];
    Vec2 vec[2];
    sym_eigen_2x2(m, ev, vec);
    // Numerical-rank decision: eigenvalues below 1e-12 of the dominant one
    // are subtraction noise on (near-)singular inputs.
    if (ev[0] < 1e-12 * std::max(ev[1], 0.0)) ev[0] = 0.0;
    const double s0 = std::sqrt(std::max(ev[0], 0.0));
    const double s1 = std::sqrt(std::max(ev[1], 0.0));
    Mat2 r{};
    r.m00 = s0 * vec[0].x * vec[0].x + s1 * vec[1].x * vec[1].x;
    r.m01 = s0 * vec[0].x * vec[0].y + s1 * vec[1].x * vec[1].y;
    r.m10 = r.m01;
    r.m11 = s0 * vec[0].y * vec[0].y + s1 * vec[1].y * vec[1].y;
    return r;
}

}  // namespace

double w2_gaussian_numeric(const Gauss2& g1, const Gauss2& g2) {
    require_psd(g1.sigma);
    require_psd(g2.sigma);
    const Mat2 s1h = sqrtm_eigen(g1.sigma);
    const Mat2 inner = s1h * g2.sigma * s1h;
    const Mat2 sym{inner.m00, 0.5 * (inner.m01 + inner.m10),
                   0.5 * (inner.m01 + inner.m10), inner.m11};
    const Mat2 c = sqrtm_eigen(sym);
    const double tr = g1.sigma.trace() + g2.sigma.trace() - 2.0 * c.trace();
    return std::max(norm2(g1.mu - g2.mu) + tr, 0.0);
}

EdgeDensity uniform_edge_density() {
    return EdgeDensity{[](double) { return 0.5; }, 1.0 / 3.0};
}

double edwd_edge_integral(const DirectedEdge& e1, const DirectedEdge& e2,
                          const EdgeDensity& density, int n, QuadratureRule rule) {
    if (n < 3) throw std::invalid_argument("edwd_edge_integral: need at least 3 points");
    if (rule == QuadratureRule::Simpson && n % 2 == 0) ++n;  // Simpson needs odd

    const Vec2 dc = e1.center() - e2.center();
    const Vec2 dv = 0.5 * (e1.vec() - e2.vec());
    const auto integrand = [&](double x) { return density.pdf(x) * norm2(dc + x * dv); };
    const auto first_moment = [&](double x) { return density.pdf(x) * x; };

    const double h = 2.0 / (n - 1);
    double acc = 0.0, moment = 0.0;
    if (rule == QuadratureRule::Trapezoid) {
        for (int i = 0; i < n; ++i) {
            const double x = -1.0 + i * h;
            const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            acc += w * integrand(x);
            moment += w * first_moment(x);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const double x = -1.0 + i * h;
            const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            acc += w * integrand(x);
            moment += w * first_moment(x);
        }
        acc /= 3.0;
        moment /= 3.0;
    }
    acc *= h;
    moment *= h;
    if (std::abs(moment) > 1e-9) {
        throw std::invalid_argument("edwd_edge_integral: density must be symmetric about 0");
    }
    return acc;
}

double discrete_ot(const PointCloud& p, const PointCloud& q) {
    validate_cloud(p);
    validate_cloud(q);
    const size_t n = p.points.size();
    const size_t m = q.points.size();

    if (n == m && is_uniform(p) && is_uniform(q)) {
        std::vector<std::vector<double>> cost(n, std::vector<double>(m));
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < m; ++j) cost[i][j] = norm2(p.points[i] - q.points[j]);
        }
        return hungarian_min_cost(cost) / static_cast<double>(n);
    }

    if (n > 64 || m > 64) {
        throw std::invalid_argument(
            "discrete_ot: general transport limited to 64 atoms per side; "
            "use smaller instances");
    }
    std::vector<std::vector<double>> cost(n, std::vector<double>(m));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < m; ++j) cost[i][j] = norm2(p.points[i] - q.points[j]);
    }
    TransportSimplex solver(p.weights, q.weights, cost);
    return solver.solve();
}

OracleMatch egwd_matching_oracle(const OBox5& a, const OBox5& b) {
    const EdgeSeq ea = to_edges(a);
    const EdgeSeq eb = to_edges(b);
    Gauss2 ga[4], gb[4];
    for (int i = 0; i < 4; ++i) {
        ga[i] = edge_gaussian(ea[i]);
        gb[i] = edge_gaussian(eb[i]);
    }
    OracleMatch best;
    for (int k = 0; k < 4; ++k) {
        double total = 0.0;
        for (int i = 0; i < 4; ++i) total += w2_gaussian_numeric(ga[i], gb[(i + k) % 4]);
        if (k == 0 || total < best.value) {
            best.value = total;
            best.match_k = k;
        }
    }
    return best;
}

double edwd_box_integral_oracle(const OBox5& pred, const OBox5& target,
                                const EdgeDensity& density, int n, QuadratureRule rule) {
    const EdgeSeq ep = to_edges(pred);
    const EdgeSeq et = to_edges(target);
    double best = 0.0;
    for (int k = 0; k < 4; ++k) {
        double total = 0.0;
        for (int i = 0; i < 4; ++i) {
            total += edwd_edge_integral(ep[i], et[(i + k) % 4], density, n, rule);
        }
        if (k == 0 || total < best) best = total;
    }
    return best;
}

}  // namespace ewd
