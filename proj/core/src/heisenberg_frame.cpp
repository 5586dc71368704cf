#include <cmath>
#include <limits>
#include <stdexcept>

#include "solab/frame_families.hpp"
#include "solab/heisenberg.hpp"

namespace solab::heisenberg {

namespace {

// c^2 = G(phi) with two phi-derivatives.
struct GJet {
  double g, g1, g2;
};

GJet soliton_g(int n, double phi) {
  const double f = F(n, phi), fp = F_prime(n, phi), fpp = F_second(n, phi);
  const double p = std::pow(phi, n - 1);
  return {f / p, fp / p - (n - 1) * f / (p * phi),
          fpp / p - 2.0 * (n - 1) * fp / (p * phi) + n * (n - 1.0) * f / (p * phi * phi)};
}

GJet model_g(int n, AsymptoticEnd end, double phi) {
  if (end == AsymptoticEnd::cone) return {2.0 * phi, 2.0, 0.0};
  const double k = 2.0 / (n + 2);
  return {k * phi * phi, 2.0 * k * phi, 2.0 * k};
}

// Chart s = phi: a_i = b_i = sqrt(phi), and dphi/dt = phi^n G from the
// relation 2a'/a = a^{2n-2} c^2 between the metric functions.
frame::FramePoint heisenberg_type_point(int n, double phi, const GJet& G,
                                        const frame::Jet& f, double lambda) {
  if (!(phi > 0) || !(G.g > 0)) throw std::domain_error("heisenberg frame: phi and G must be > 0");
  frame::DiagonalJet j;
  const double r = std::sqrt(phi);
  const frame::Jet a{r, 0.5 / r, -0.25 / (r * phi)};
  j.a.assign(n, a);
  j.b.assign(n, a);
  const double c = std::sqrt(G.g);
  j.c = {c, 0.5 * G.g1 / c, 0.5 * G.g2 / c - 0.25 * G.g1 * G.g1 / (c * G.g)};
  const double pn = std::pow(phi, n);
  const double rate = pn * G.g;  // dphi/dt
  j.t = {0.0, 1.0 / rate, -(n * pn / phi * G.g + pn * G.g1) / (rate * rate)};
  j.f = f;
  return frame::diagonal_frame_point(frame::BianchiConstants::heisenberg(n), j, lambda);
}

frame::ChartedFamily soliton_family(const HeisenbergSoliton& s) {
  const int n = s.n;
  const double lambda = s.lambda;
  return frame::ChartedFamily(
      [n, lambda](double phi) {
        return heisenberg_type_point(n, phi, soliton_g(n, phi), {-phi, -1.0, 0.0}, lambda);
      },
      [n](double phi) { return std::sqrt(2.0 / soliton_g(n, phi).g); }, 0.0,
      std::numeric_limits<double>::infinity(), 1.0, true);
}

frame::ChartedFamily model_family(int n, AsymptoticEnd end) {
  return frame::ChartedFamily(
      [n, end](double phi) {
        return heisenberg_type_point(n, phi, model_g(n, end, phi), {0.0, 0.0, 0.0}, -1.0);
      },
      [n, end](double phi) { return std::sqrt(2.0 / model_g(n, end, phi).g); }, 0.0,
      std::numeric_limits<double>::infinity(), 1.0, true);
}

}  // namespace

frame::FramePoint soliton_frame_point(const HeisenbergSoliton& s, double phi) {
  return heisenberg_type_point(s.n, phi, soliton_g(s.n, phi), {-phi, -1.0, 0.0}, s.lambda);
}

frame::FrameStructure soliton_frame(const HeisenbergSoliton& s) {
  return soliton_family(s).structure(s.n, s.lambda, "heisenberg");
}

frame::FramePoint model_frame_point(int n, AsymptoticEnd end, double phi) {
  return heisenberg_type_point(n, phi, model_g(n, end, phi), {0.0, 0.0, 0.0}, -1.0);
}

frame::FrameStructure model_frame(int n, AsymptoticEnd end) {
  return model_family(n, end).structure(
      n, -1.0, end == AsymptoticEnd::cone ? "heisenberg-cone" : "heisenberg-cusp");
}

double tau_of_phi(const HeisenbergSoliton& s, double phi) {
  return soliton_family(s).tau_of(phi);
}

double phi_of_tau(const HeisenbergSoliton& s, double tau) {
  return soliton_family(s).s_of(tau);
}

}  // namespace solab::heisenberg
