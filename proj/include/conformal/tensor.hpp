#pragma once

#include "conformal/chart.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace conformal {

/// Largest generalized eigenvalue of the pencil (S, H), by whitening
/// H = L L^T and a symmetric eigendecomposition of L^-1 S L^-T.
template <typename Scalar>
Scalar pencil_max_eigenvalue(const Mat<Scalar>& s, const Mat<Scalar>& h) {
  Eigen::LLT<Mat<Scalar>> llt(h);
  if (llt.info() != Eigen::Success) throw ConditioningError("tensor norm: reference metric is not positive definite");
  const auto l = llt.matrixL();
  const Mat<Scalar> x = l.solve(s);                             // L^-1 S
  Mat<Scalar> m = l.solve(x.transpose()).transpose();          // L^-1 S L^-T
  m = (Scalar(0.5) * (m + m.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m.rows() - 1);
}

/// sup over v != 0 of sqrt(s(v,v) / h(v,v)) at x.
template <typename Scalar>
Scalar tensor_norm(const SymTensorField<Scalar>& s, const MetricChart<Scalar>& h, const Vec<Scalar>& x) {
  using std::max;
  using std::sqrt;
  const Mat<Scalar> hx = h.at(x);
  const Mat<Scalar> sx = s(x);
  if (sx.rows() != hx.rows() || sx.cols() != hx.cols())
    throw ConfigurationError("tensor_norm: tensor and metric dimensions differ");
  Eigen::LLT<Mat<Scalar>> llt(hx);
  if (llt.info() != Eigen::Success)
    throw ConditioningError(h.label() + ": not positive definite at " + format_point(x));
  return sqrt(max(pencil_max_eigenvalue<Scalar>(sx, hx), Scalar(0)));
}

/// sqrt(beta^T H^-1 beta).
template <typename Scalar>
Scalar oneform_norm(const OneForm<Scalar>& beta, const MetricChart<Scalar>& h, const Vec<Scalar>& x) {
  using std::max;
  using std::sqrt;
  const Mat<Scalar> hx = h.at(x);
  const Vec<Scalar> b = beta(x);
  if (b.size() != hx.rows()) throw ConfigurationError("oneform_norm: covector dimension differs from the metric");
  Eigen::LLT<Mat<Scalar>> llt(hx);
  if (llt.info() != Eigen::Success)
    throw ConditioningError(h.label() + ": not positive definite at " + format_point(x));
  const Vec<Scalar> y = llt.matrixL().solve(b);
  return sqrt(max(y.squaredNorm(), Scalar(0)));
}

}  // namespace conformal
