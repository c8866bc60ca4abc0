#include "hydro/electrical.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "hydro/errors.hpp"

namespace hydro {

InversionCoefficients inversion_coefficients(const DerivedElectricalParams& der,
                                             const GeneratorRatings& gen) {
  InversionCoefficients c;
  c.a1 = gen.x_d;
  c.a2 = gen.x_q;
  c.a3 = der.x_ad * der.x_ad / der.x_r;
  c.a4 = der.x_ad / der.x_r;
  c.a5 = der.x_ad * der.x_ad / der.x_rd;
  c.a6 = der.x_ad / der.x_rd;
  c.a7 = der.x_aq * der.x_aq / der.x_rq;

  c.b1 = (c.a1 - c.a5) * (c.a4 - 1.0) - (c.a1 * c.a4 - c.a3) * (1.0 - c.a6);

  auto guard = [](bool ok, const char* what) {
    if (!ok) throw ParameterError(std::string("inversion_coefficients: ") + what);
  };
  guard(std::abs(c.b1) > 1e-14, "b1 vanishes");
  guard(std::abs(c.a2 - c.a7) > 1e-14, "a2 = a7");
  guard(std::abs(1.0 - c.a4) > 1e-14, "a4 = 1");
  guard(std::abs(1.0 - c.a6) > 1e-14, "a6 = 1");

  c.X_d = (c.a4 * c.a6 - 1.0) / c.b1;
  c.X_r = (c.a6 - 1.0) / c.b1;
  c.X_rd = (1.0 - c.a4) / c.b1;

  c.Y_q = 1.0 / (c.a2 - c.a7);
  c.Y_rq = 1.0 / (c.a2 - c.a7);

  c.Z_d = (c.b1 - (c.a1 - c.a5) * (c.a4 * c.a6 - 1.0)) / (c.b1 * (1.0 - c.a6));
  c.Z_r = (c.a5 - c.a1) / c.b1;
  c.Z_rd = (c.b1 + (c.a1 - c.a5) * (1.0 - c.a4)) / (c.b1 * (1.0 - c.a6));

  c.P_q = c.a7 / (c.a2 - c.a7);
  c.P_rq = c.a2 / (c.a2 - c.a7);

  c.Q_d = ((c.a1 - c.a3) * (c.a4 * c.a6 - 1.0) - c.b1) / (c.b1 * (1.0 - c.a4));
  c.Q_r = ((c.a1 - c.a3) * (c.a6 - 1.0) - c.b1) / (c.b1 * (1.0 - c.a4));
  c.Q_rd = (c.a3 - c.a1) / c.b1;

  return c;
}

FluxInverter::FluxInverter(const UnitParams& params) {
  coef_ = inversion_coefficients(params.der, params.gen);
  const auto& c = coef_;

  Eigen::Matrix3d Md;
  Md << c.a1, 1.0, 1.0,   // psi_d row: i_d, E_q, E_rq
      c.a3, 1.0, c.a4,    // psi_r row
      c.a5, c.a6, 1.0;    // psi_rd row
  Eigen::Matrix2d Mq;
  Mq << c.a2, -1.0,       // psi_q row: i_q, E_rd
      c.a7, -1.0;         // psi_rq row

  auto check_cond = [&](const auto& m, const char* axis) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond < params.tol.cond_threshold)) {
      std::ostringstream os;
      os << "flux inversion: " << axis << "-axis block numerically singular (cond="
         << cond << ")";
      throw NumericError(os.str());
    }
    return cond;
  };
  cond_d_ = check_cond(Md, "d");
  cond_q_ = check_cond(Mq, "q");

  const Eigen::Matrix3d Mdi = Md.inverse();
  const Eigen::Matrix2d Mqi = Mq.inverse();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) di_[i][j] = Mdi(i, j);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) qi_[i][j] = Mqi(i, j);
}

ElectricalSolution FluxInverter::invert(double psi_d, double psi_q, double psi_r,
                                        double psi_rd, double psi_rq, Path path) const {
  ElectricalSolution s;
  if (path == Path::direct_solve) {
    s.i_d = di_[0][0] * psi_d + di_[0][1] * psi_r + di_[0][2] * psi_rd;
    s.E_q = di_[1][0] * psi_d + di_[1][1] * psi_r + di_[1][2] * psi_rd;
    s.E_rq = di_[2][0] * psi_d + di_[2][1] * psi_r + di_[2][2] * psi_rd;
    s.i_q = qi_[0][0] * psi_q + qi_[0][1] * psi_rq;
    s.E_rd = qi_[1][0] * psi_q + qi_[1][1] * psi_rq;
  } else {
    const auto& c = coef_;
    s.i_d = c.X_d * psi_d - c.X_r * psi_r + c.X_rd * psi_rd;
    s.i_q = c.Y_q * psi_q - c.Y_rq * psi_rq;
    s.E_q = c.Z_d * psi_d + c.Z_r * psi_r - c.Z_rd * psi_rd;
    s.E_rd = c.P_q * psi_q - c.P_rq * psi_rq;
    s.E_rq = -c.Q_d * psi_d + c.Q_r * psi_r + c.Q_rd * psi_rd;
  }
  return s;
}

std::array<double, 5> FluxInverter::substitute(const ElectricalSolution& sol) const {
  const auto& c = coef_;
  return {
      c.a1 * sol.i_d + sol.E_q + sol.E_rq,
      c.a2 * sol.i_q - sol.E_rd,
      c.a3 * sol.i_d + sol.E_q + c.a4 * sol.E_rq,
      c.a5 * sol.i_d + c.a6 * sol.E_q + sol.E_rq,
      c.a7 * sol.i_q - sol.E_rd,
  };
}

ElectricalSolution flux_inverse(double psi_d, double psi_q, double psi_r, double psi_rd,
                                double psi_rq, const UnitParams& params,
                                FluxInverter::Path path) {
  return FluxInverter(params).invert(psi_d, psi_q, psi_r, psi_rd, psi_rq, path);
}

double instantaneous_power(double i_d, double i_q, double U, double theta) {
  return -1.5 * (i_d * U * std::sin(theta) + i_q * U * std::cos(theta));
}

}  // namespace hydro
