#include "ratquad/quad1d.hpp"

#include "ratquad/bezier.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace ratquad
{
namespace
{
constexpr double pole_cutoff = 1e-8;
constexpr double max_condition = 1e13;

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x)
{
  double p0 = 1.0;
  double p1 = x;
  if(n == 0)
  {
    return {1.0, 0.0};
  }
  for(int k = 2; k <= n; ++k)
  {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

Rule1D golub_welsch(int n)
{
  Rule1D rule;
  rule.lo = -1.0;
  rule.hi = 1.0;
  if(n == 1)
  {
    rule.nodes = {0.0};
    rule.weights = {2.0};
    return rule;
  }

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for(int k = 1; k < n; ++k)
  {
    sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

  std::vector<double> x(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(x.begin(), x.end());

  rule.nodes.resize(n);
  rule.weights.resize(n);
  for(int k = 0; k < n; ++k)
  {
    double xk = x[k];
    for(int it = 0; it < 3; ++it)
    {
      const auto [p, dp] = legendre(n, xk);
      xk -= p / dp;
    }
    const auto [p, dp] = legendre(n, xk);
    rule.nodes[k] = xk;
    rule.weights[k] = 2.0 / ((1.0 - xk * xk) * dp * dp);
  }
  // Enforce the exact symmetry of the rule.
  for(int k = 0; k < n / 2; ++k)
  {
    const int j = n - 1 - k;
    const double node = 0.5 * (rule.nodes[j] - rule.nodes[k]);
    const double weight = 0.5 * (rule.weights[j] + rule.weights[k]);
    rule.nodes[k] = -node;
    rule.nodes[j] = node;
    rule.weights[k] = weight;
    rule.weights[j] = weight;
  }
  if(n % 2 == 1)
  {
    rule.nodes[n / 2] = 0.0;
  }
  return rule;
}

const Rule1D& reference_gauss(int n)
{
  static std::mutex mutex;
  static std::map<int, Rule1D> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if(it == cache.end())
  {
    it = cache.emplace(n, golub_welsch(n)).first;
  }
  return it->second;
}

Complex eval_bernstein_complex(std::span<const double> coeffs, Complex s)
{
  std::vector<Complex> work(coeffs.begin(), coeffs.end());
  const Complex t = 1.0 - s;
  for(std::size_t level = work.size(); level > 1; --level)
  {
    for(std::size_t k = 0; k + 1 < level; ++k)
    {
      work[k] = t * work[k] + s * work[k + 1];
    }
  }
  return work[0];
}

Complex eval_monomial(std::span<const double> a, Complex s)
{
  Complex acc = 0.0;
  for(auto it = a.rbegin(); it != a.rend(); ++it)
  {
    acc = acc * s + *it;
  }
  return acc;
}

Complex eval_monomial_derivative(std::span<const double> a, Complex s)
{
  Complex acc = 0.0;
  for(std::size_t k = a.size(); k-- > 1;)
  {
    acc = acc * s + static_cast<double>(k) * a[k];
  }
  return acc;
}

// Orthonormal basis of the polynomials of degree <= l plus the partial
// fractions of a pole set, built by rational Arnoldi on a composite Gauss grid
// graded toward the poles. The complex basis is compressed to a real one.
class RationalBasis
{
public:
  RationalBasis(const PoleSet& poles, int poly_degree)
  {
    for(int j = 1; j <= poly_degree; ++j)
    {
      m_steps.push_back({false, Complex(), static_cast<std::size_t>(j - 1)});
    }
    for(const auto& pole : poles.poles())
    {
      std::size_t parent = 0;
      for(int j = 0; j < pole.multiplicity; ++j)
      {
        m_steps.push_back({true, pole.location, parent});
        parent = m_steps.size();
      }
    }
    m_size = m_steps.size() + 1;

    std::vector<std::pair<double, double>> panels;
    split(poles, 0.0, 1.0, 0, panels);
    const Rule1D& g = reference_gauss(std::max(20, static_cast<int>(m_size) + 16));
    std::vector<double> z;
    std::vector<double> w;
    for(const auto& [a, b] : panels)
    {
      const double half = 0.5 * (b - a);
      for(std::size_t k = 0; k < g.size(); ++k)
      {
        z.push_back(a + half * (g.nodes[k] + 1.0));
        w.push_back(half * g.weights[k]);
      }
    }

    const auto n = static_cast<Eigen::Index>(m_size);
    const auto rows = static_cast<Eigen::Index>(z.size());
    Eigen::VectorXd sqrt_w(rows);
    for(Eigen::Index k = 0; k < rows; ++k)
    {
      sqrt_w[k] = std::sqrt(w[static_cast<std::size_t>(k)]);
    }
    Eigen::MatrixXcd q(rows, n);
    q.col(0) = sqrt_w.cast<Complex>();
    m_norm0 = q.col(0).norm();
    q.col(0) /= m_norm0;
    m_coeffs.resize(m_steps.size());
    m_diag.resize(m_steps.size());
    for(std::size_t j = 0; j < m_steps.size(); ++j)
    {
      const auto& step = m_steps[j];
      Eigen::VectorXcd v(rows);
      for(Eigen::Index k = 0; k < rows; ++k)
      {
        v[k] = q(k, static_cast<Eigen::Index>(step.parent)) * factor(step, z[static_cast<std::size_t>(k)]);
      }
      const auto cols = static_cast<Eigen::Index>(j + 1);
      Eigen::VectorXcd h = Eigen::VectorXcd::Zero(cols);
      for(int pass = 0; pass < 2; ++pass)
      {
        const Eigen::VectorXcd c = q.leftCols(cols).adjoint() * v;
        v -= q.leftCols(cols) * c;
        h += c;
      }
      m_coeffs[j] = h;
      m_diag[j] = v.norm();
      q.col(cols) = v / m_diag[j];
    }

    Eigen::MatrixXd real_q(rows, 2 * n);
    real_q << q.real(), q.imag();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(real_q, Eigen::ComputeThinU | Eigen::ComputeThinV);
    m_compress = svd.matrixV().leftCols(n) * svd.singularValues().head(n).cwiseInverse().asDiagonal();
    m_moments = svd.matrixU().leftCols(n).transpose() * sqrt_w;
  }

  std::size_t size() const { return m_size; }

  const Eigen::VectorXd& moments() const { return m_moments; }

  // Real basis functions at the nodes, one column per node.
  Eigen::MatrixXd evaluate(std::span<const double> nodes) const
  {
    const auto n = static_cast<Eigen::Index>(m_size);
    const auto cols = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXcd q(cols, n);
    q.col(0).setConstant(1.0 / m_norm0);
    for(std::size_t j = 0; j < m_steps.size(); ++j)
    {
      const auto& step = m_steps[j];
      const auto used = static_cast<Eigen::Index>(j + 1);
      for(Eigen::Index k = 0; k < cols; ++k)
      {
        q(k, used) = q(k, static_cast<Eigen::Index>(step.parent)) * factor(step, nodes[static_cast<std::size_t>(k)]);
      }
      q.col(used) = (q.col(used) - q.leftCols(used) * m_coeffs[j]) / m_diag[j];
    }
    Eigen::MatrixXd real_q(cols, 2 * n);
    real_q << q.real(), q.imag();
    return (real_q * m_compress).transpose();
  }

private:
  struct Step
  {
    bool pole;
    Complex location;
    std::size_t parent;
  };

  static Complex factor(const Step& step, double s)
  {
    return step.pole ? 1.0 / (s - step.location) : Complex(2.0 * s - 1.0);
  }

  // Panels no longer than their distance to the nearest pole.
  static void split(const PoleSet& poles, double a, double b, int depth, std::vector<std::pair<double, double>>& out)
  {
    double dist = std::numeric_limits<double>::infinity();
    for(const auto& p : poles.poles())
    {
      const double x = std::clamp(p.location.real(), a, b);
      dist = std::min(dist, std::abs(Complex(x, 0.0) - p.location));
    }
    if(b - a <= dist || depth >= 80)
    {
      out.emplace_back(a, b);
      return;
    }
    const double mid = 0.5 * (a + b);
    split(poles, a, mid, depth + 1, out);
    split(poles, mid, b, depth + 1, out);
  }

  std::vector<Step> m_steps;
  std::size_t m_size = 0;
  double m_norm0 = 1.0;
  std::vector<Eigen::VectorXcd> m_coeffs;
  std::vector<double> m_diag;
  Eigen::MatrixXd m_compress;
  Eigen::VectorXd m_moments;
};

// Continuous antiderivative of the Poisson kernel (1-r^2)/(1-2r cos t+r^2) from 0 to x, x in [-pi, 2pi].
double poisson_phase(double r, double x)
{
  const double pi = std::numbers::pi;
  if(x > pi)
  {
    return 2.0 * pi + poisson_phase(r, x - 2.0 * pi);
  }
  if(x == pi)
  {
    return pi;
  }
  if(x == -pi)
  {
    return -pi;
  }
  return 2.0 * std::atan((1.0 + r) / (1.0 - r) * std::tan(0.5 * x));
}

// Nodes where the phase of the rational Chebyshev function of the pole set
// reaches k*pi. With no poles these are the zeros of U_n mapped to [0,1].
class NodePhase
{
public:
  NodePhase(const PoleSet& poles, int poly_phase)
    : m_poly_phase(poly_phase)
  {
    for(const auto& pole : poles.poles())
    {
      // Joukowski preimage inside the unit disk of the pole in x = 2s - 1.
      const Complex alpha = 2.0 * pole.location - 1.0;
      Complex root = std::sqrt(alpha * alpha - 1.0);
      Complex beta = alpha - root;
      if(std::abs(beta) > 1.0)
      {
        beta = alpha + root;
      }
      m_terms.push_back({std::abs(beta), std::arg(beta), pole.multiplicity});
    }
  }

  double operator()(double theta) const
  {
    double phi = m_poly_phase * theta;
    for(const auto& t : m_terms)
    {
      phi += t.multiplicity * (poisson_phase(t.radius, theta - t.angle) - poisson_phase(t.radius, -t.angle));
    }
    return phi;
  }

  std::vector<double> nodes(std::size_t n) const
  {
    std::vector<double> out(n);
    for(std::size_t k = 0; k < n; ++k)
    {
      const double target = std::numbers::pi * static_cast<double>(k + 1);
      double lo = 0.0;
      double hi = std::numbers::pi;
      for(int it = 0; it < 200 && hi - lo > 1e-15; ++it)
      {
        const double mid = 0.5 * (lo + hi);
        ((*this)(mid) < target ? lo : hi) = mid;
      }
      out[n - 1 - k] = 0.5 * (1.0 + std::cos(0.5 * (lo + hi)));
    }
    return out;
  }

private:
  struct Term
  {
    double radius;
    double angle;
    int multiplicity;
  };
  int m_poly_phase;
  std::vector<Term> m_terms;
};

struct MomentSystem
{
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};

MomentSystem build_system(const RationalBasis& basis, std::span<const double> nodes)
{
  return {basis.evaluate(nodes), basis.moments()};
}

// Residual r = rhs - A v accumulated in extended precision.
Eigen::VectorXd residual(const MomentSystem& sys, const Eigen::VectorXd& v)
{
  Eigen::VectorXd r(sys.rhs.size());
  for(Eigen::Index b = 0; b < sys.matrix.rows(); ++b)
  {
    long double acc = sys.rhs[b];
    for(Eigen::Index k = 0; k < sys.matrix.cols(); ++k)
    {
      acc -= static_cast<long double>(sys.matrix(b, k)) * static_cast<long double>(v[k]);
    }
    r[b] = static_cast<double>(acc);
  }
  return r;
}

double condition_number(const Eigen::MatrixXd& a)
{
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  const double c = sv[0] / sv[sv.size() - 1];
  return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

Rule1D make_rule(std::span<const double> nodes, const Eigen::VectorXd& v)
{
  Rule1D rule;
  rule.lo = 0.0;
  rule.hi = 1.0;
  rule.nodes.assign(nodes.begin(), nodes.end());
  rule.weights.assign(v.data(), v.data() + v.size());
  return rule;
}

}  // namespace

// -- Rule1D / Gauss-Legendre --------------------------------------------------

Rule1D Rule1D::mapped(double new_lo, double new_hi) const
{
  Rule1D out;
  out.lo = new_lo;
  out.hi = new_hi;
  const double scale = (new_hi - new_lo) / (hi - lo);
  out.nodes.resize(nodes.size());
  out.weights.resize(weights.size());
  for(std::size_t k = 0; k < nodes.size(); ++k)
  {
    out.nodes[k] = new_lo + (nodes[k] - lo) * scale;
    out.weights[k] = weights[k] * scale;
  }
  return out;
}

Rule1D gauss_legendre(int n, double lo, double hi)
{
  if(n < 1)
  {
    throw ValidationError("Gauss-Legendre rule needs n >= 1, got " + std::to_string(n));
  }
  if(!(hi != lo) || !std::isfinite(lo) || !std::isfinite(hi))
  {
    throw ValidationError("Gauss-Legendre rule needs a nondegenerate finite interval");
  }
  const Rule1D& ref = reference_gauss(n);
  if(lo == -1.0 && hi == 1.0)
  {
    return ref;
  }
  return ref.mapped(lo, hi);
}

// -- Poles --------------------------------------------------------------------

double distance_to_unit_interval(Complex p)
{
  const double x = std::clamp(p.real(), 0.0, 1.0);
  return std::abs(p - Complex(x, 0.0));
}

PoleSet::PoleSet(std::vector<Pole> poles)
  : m_poles(std::move(poles))
{
  for(auto& pole : m_poles)
  {
    if(pole.multiplicity < 1)
    {
      throw ValidationError("pole multiplicity must be positive");
    }
    if(!std::isfinite(pole.location.real()) || !std::isfinite(pole.location.imag()))
    {
      throw ValidationError("pole location is not finite");
    }
    if(std::abs(pole.location.imag()) <= 1e-14 * std::abs(pole.location))
    {
      pole.location.imag(0.0);
    }
    if(!(distance_to_unit_interval(pole.location) > 0.0))
    {
      throw ValidationError("pole lies on [0,1]");
    }
  }
  // Every nonreal pole needs a conjugate partner with equal multiplicity.
  for(const auto& pole : m_poles)
  {
    if(pole.location.imag() == 0.0)
    {
      continue;
    }
    const Complex target = std::conj(pole.location);
    const double tol = 1e-10 * std::max(1.0, std::abs(target));
    const bool found = std::any_of(m_poles.begin(), m_poles.end(), [&](const Pole& other) {
      return std::abs(other.location - target) <= tol && other.multiplicity == pole.multiplicity;
    });
    if(!found)
    {
      throw ValidationError("pole set is not closed under conjugation");
    }
  }
}

PoleSet PoleSet::from_roots(std::span<const Complex> roots, double merge_tol)
{
  std::vector<Pole> poles;
  std::vector<int> counts;
  std::vector<Complex> sums;
  for(const Complex& r : roots)
  {
    bool merged = false;
    for(std::size_t k = 0; k < poles.size(); ++k)
    {
      if(std::abs(r - poles[k].location) <= merge_tol * std::max(1.0, std::abs(r)))
      {
        sums[k] += r;
        ++counts[k];
        poles[k].multiplicity = counts[k];
        poles[k].location = sums[k] / static_cast<double>(counts[k]);
        merged = true;
        break;
      }
    }
    if(!merged)
    {
      poles.push_back({r, 1});
      counts.push_back(1);
      sums.push_back(r);
    }
  }
  // Restore exact conjugate symmetry after averaging.
  for(auto& pole : poles)
  {
    if(pole.location.imag() < 0.0)
    {
      for(const auto& other : poles)
      {
        if(other.location.imag() > 0.0 &&
           std::abs(other.location - std::conj(pole.location)) <= 1e-8 * std::max(1.0, std::abs(pole.location)))
        {
          pole.location = std::conj(other.location);
          break;
        }
      }
    }
  }
  return PoleSet(std::move(poles));
}

int PoleSet::total_multiplicity() const
{
  int total = 0;
  for(const auto& pole : m_poles)
  {
    total += pole.multiplicity;
  }
  return total;
}

PoleSet PoleSet::scaled(int factor) const
{
  if(factor < 1)
  {
    throw ValidationError("pole multiplicity factor must be positive");
  }
  auto poles = m_poles;
  for(auto& pole : poles)
  {
    pole.multiplicity *= factor;
  }
  return PoleSet(std::move(poles));
}

std::vector<Complex> weight_poly_roots(std::span<const double> weights, Diagnostics* diag)
{
  if(weights.empty())
  {
    throw ValidationError("weight polynomial needs at least one coefficient");
  }
  const double wmax = std::abs(*std::max_element(weights.begin(), weights.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  }));
  if(wmax == 0.0)
  {
    throw ValidationError("weight polynomial is identically zero");
  }

  std::vector<double> a = bernstein_to_monomial(weights, diag);
  const double amax = std::abs(*std::max_element(a.begin(), a.end(), [](double x, double y) {
    return std::abs(x) < std::abs(y);
  }));
  while(a.size() > 1 && std::abs(a.back()) <= 1e-12 * amax)
  {
    a.pop_back();
  }
  const int degree = static_cast<int>(a.size()) - 1;
  if(degree == 0)
  {
    return {};
  }

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for(int i = 1; i < degree; ++i)
  {
    companion(i, i - 1) = 1.0;
  }
  for(int i = 0; i < degree; ++i)
  {
    companion(i, degree - 1) = -a[i] / a[degree];
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if(solver.info() != Eigen::Success)
  {
    throw NumericError("companion matrix eigenvalue solve failed");
  }

  std::vector<Complex> roots;
  roots.reserve(degree);
  for(int i = 0; i < degree; ++i)
  {
    Complex z = solver.eigenvalues()[i];
    // Newton polish on the monomial form, keeping the step only if it helps.
    for(int it = 0; it < 3; ++it)
    {
      const Complex f = eval_monomial(a, z);
      const Complex df = eval_monomial_derivative(a, z);
      if(df == 0.0)
      {
        break;
      }
      const Complex next = z - f / df;
      if(std::abs(eval_bernstein_complex(weights, next)) < std::abs(eval_bernstein_complex(weights, z)))
      {
        z = next;
      }
      else
      {
        break;
      }
    }
    if(std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z)))
    {
      z.imag(0.0);
    }
    roots.push_back(z);
  }

  // Order: real roots ascending, then conjugate pairs (upper member first).
  std::vector<Complex> real_roots;
  std::vector<Complex> upper;
  std::vector<Complex> lower;
  for(const Complex& z : roots)
  {
    if(z.imag() == 0.0)
    {
      real_roots.push_back(z);
    }
    else if(z.imag() > 0.0)
    {
      upper.push_back(z);
    }
    else
    {
      lower.push_back(z);
    }
  }
  if(upper.size() != lower.size())
  {
    throw NumericError("weight polynomial roots are not conjugate-paired");
  }
  auto by_real = [](const Complex& x, const Complex& y) {
    return x.real() < y.real() || (x.real() == y.real() && std::abs(x.imag()) < std::abs(y.imag()));
  };
  std::sort(real_roots.begin(), real_roots.end(), by_real);
  std::sort(upper.begin(), upper.end(), by_real);

  std::vector<Complex> out = real_roots;
  std::vector<bool> used(lower.size(), false);
  for(const Complex& z : upper)
  {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for(std::size_t k = 0; k < lower.size(); ++k)
    {
      const double d = std::abs(lower[k] - std::conj(z));
      if(!used[k] && d < best_dist)
      {
        best = k;
        best_dist = d;
      }
    }
    used[best] = true;
    const Complex avg = 0.5 * (z + std::conj(lower[best]));
    out.push_back(avg);
    out.push_back(std::conj(avg));
  }
  return out;
}

Complex partial_fraction_moment(Complex pole, int j)
{
  if(j < 1)
  {
    throw ValidationError("partial fraction order must be >= 1");
  }
  if(!(distance_to_unit_interval(pole) > 0.0))
  {
    throw ValidationError("partial fraction pole lies on [0,1]");
  }
  const Complex a = 1.0 - pole;
  const Complex b = -pole;
  if(j == 1)
  {
    return std::log(a / b);
  }
  const double e = 1.0 - j;
  return (std::pow(a, e) - std::pow(b, e)) / e;
}

Rule1D rational_rule(const PoleSet& poles, int extra_poly_degree)
{
  RationalRuleReport report;
  return rational_rule(poles, extra_poly_degree, report);
}

Rule1D rational_rule(const PoleSet& poles, int extra_poly_degree, RationalRuleReport& report)
{
  if(extra_poly_degree < 0)
  {
    throw ValidationError("extra polynomial degree must be nonnegative");
  }
  for(const auto& pole : poles.poles())
  {
    if(distance_to_unit_interval(pole.location) < pole_cutoff)
    {
      throw ValidationError("pole within 1e-8 of [0,1]");
    }
  }

  const RationalBasis basis(poles, extra_poly_degree);
  const std::size_t n = basis.size();

  {
    const auto nodes = NodePhase(poles, extra_poly_degree + 2).nodes(n);
    const MomentSystem sys = build_system(basis, nodes);
    report.condition = condition_number(sys.matrix);
    report.oversampled = false;
    if(report.condition <= max_condition)
    {
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.matrix);
      Eigen::VectorXd v = lu.solve(sys.rhs);
      for(int it = 0; it < 2; ++it)
      {
        v += lu.solve(residual(sys, v));
      }
      return make_rule(nodes, v);
    }
  }

  // Fallback: twice as many nodes, minimum-norm weights.
  const auto nodes = NodePhase(poles, extra_poly_degree + 2 + static_cast<int>(n)).nodes(2 * n);
  const MomentSystem sys = build_system(basis, nodes);
  report.condition = condition_number(sys.matrix);
  report.oversampled = true;
  if(!(report.condition <= max_condition))
  {
    char text[32];
    std::snprintf(text, sizeof text, "%.3e", report.condition);
    throw NumericError(std::string("rational moment system is ill-conditioned (condition estimate ") + text + ")");
  }
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sys.matrix);
  Eigen::VectorXd v = cod.solve(sys.rhs);
  for(int it = 0; it < 2; ++it)
  {
    v += cod.solve(residual(sys, v));
  }
  return make_rule(nodes, v);
}

}  // namespace ratquad
