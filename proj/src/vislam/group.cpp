#include "eqvio/vislam/group.hpp"

#include <string>

namespace eqvio::vislam {

namespace {
constexpr int kMatA = 5, kMatBeta = 7, kMatB = 4, kMatQ = 4;

int matrixDim(std::size_t n) { return kMatA + kMatBeta + kMatB + kMatQ * static_cast<int>(n); }

std::size_t landmarksFromAlgebra(Eigen::Index dim) {
  if (dim < 21 || (dim - 21) % 4 != 0) throw std::invalid_argument("bad algebra dimension");
  return static_cast<std::size_t>((dim - 21) / 4);
}
}  // namespace

VisGroup VisGroup::identity(const std::vector<int>& ids) {
  VisGroup X;
  for (int id : ids) X.Q.push_back({id, lie::SOT3()});
  return X;
}

VisGroup VisGroup::exp(const Eigen::VectorXd& u, const std::vector<int>& ids) {
  if (landmarksFromAlgebra(u.size()) != ids.size()) {
    throw IdMismatchError("algebra vector does not match landmark count");
  }
  VisGroup X;
  X.A = lie::SE23::exp(u.segment<9>(kAlgA));
  X.beta = u.segment<6>(kAlgBeta);
  X.B = lie::SE3::exp(u.segment<6>(kAlgB));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    X.Q.push_back({ids[i], lie::SOT3::exp(u.segment<4>(kAlgQ + 4 * i))});
  }
  return X;
}

Eigen::MatrixXd VisGroup::wedge(const Eigen::VectorXd& u) {
  const std::size_t n = landmarksFromAlgebra(u.size());
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(matrixDim(n), matrixDim(n));
  U.block<5, 5>(0, 0) = lie::SE23::wedge(u.segment<9>(kAlgA));
  U.block<6, 1>(kMatA, kMatA + 6) = u.segment<6>(kAlgBeta);
  U.block<4, 4>(kMatA + kMatBeta, kMatA + kMatBeta) = lie::SE3::wedge(u.segment<6>(kAlgB));
  const int q0 = kMatA + kMatBeta + kMatB;
  for (std::size_t i = 0; i < n; ++i) {
    U.block<4, 4>(q0 + 4 * i, q0 + 4 * i) = lie::SOT3::wedge(u.segment<4>(kAlgQ + 4 * i));
  }
  return U;
}

Eigen::VectorXd VisGroup::vee(const Eigen::MatrixXd& U) {
  const int m = static_cast<int>(U.rows());
  const int rest = m - (kMatA + kMatBeta + kMatB);
  if (rest < 0 || rest % kMatQ != 0 || U.cols() != m) {
    throw std::invalid_argument("bad algebra matrix dimension");
  }
  const std::size_t n = static_cast<std::size_t>(rest / kMatQ);
  Eigen::VectorXd u(algebraDim(n));
  u.segment<9>(kAlgA) = lie::SE23::vee(U.block<5, 5>(0, 0));
  u.segment<6>(kAlgBeta) = U.block<6, 1>(kMatA, kMatA + 6);
  u.segment<6>(kAlgB) = lie::SE3::vee(U.block<4, 4>(kMatA + kMatBeta, kMatA + kMatBeta));
  const int q0 = kMatA + kMatBeta + kMatB;
  for (std::size_t i = 0; i < n; ++i) {
    u.segment<4>(kAlgQ + 4 * i) = lie::SOT3::vee(U.block<4, 4>(q0 + 4 * i, q0 + 4 * i));
  }
  return u;
}

Eigen::VectorXd VisGroup::log() const {
  Eigen::VectorXd u(algebraDim(Q.size()));
  u.segment<9>(kAlgA) = A.log();
  u.segment<6>(kAlgBeta) = beta;
  u.segment<6>(kAlgB) = B.log();
  for (std::size_t i = 0; i < Q.size(); ++i) u.segment<4>(kAlgQ + 4 * i) = Q[i].Q.log();
  return u;
}

VisGroup VisGroup::inverse() const {
  VisGroup X;
  X.A = A.inverse();
  X.beta = -beta;
  X.B = B.inverse();
  for (const auto& q : Q) X.Q.push_back({q.id, q.Q.inverse()});
  return X;
}

VisGroup VisGroup::operator*(const VisGroup& other) const {
  if (Q.size() != other.Q.size()) throw IdMismatchError("landmark count mismatch in product");
  VisGroup X;
  X.A = A * other.A;
  X.beta = beta + other.beta;
  X.B = B * other.B;
  X.Q.reserve(Q.size());
  for (std::size_t i = 0; i < Q.size(); ++i) {
    if (Q[i].id != other.Q[i].id) {
      throw IdMismatchError("landmark id mismatch in product: " + std::to_string(Q[i].id));
    }
    X.Q.push_back({Q[i].id, Q[i].Q * other.Q[i].Q});
  }
  return X;
}

Eigen::MatrixXd VisGroup::matrix() const {
  const std::size_t n = Q.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(matrixDim(n), matrixDim(n));
  M.block<5, 5>(0, 0) = A.matrix();
  M.block<6, 1>(kMatA, kMatA + 6) = beta;
  M.block<4, 4>(kMatA + kMatBeta, kMatA + kMatBeta) = B.matrix();
  const int q0 = kMatA + kMatBeta + kMatB;
  for (std::size_t i = 0; i < n; ++i) M.block<4, 4>(q0 + 4 * i, q0 + 4 * i) = Q[i].Q.matrix();
  return M;
}

Eigen::MatrixXd VisGroup::Adjoint() const {
  const int d = algebraDim(Q.size());
  Eigen::MatrixXd Ad = Eigen::MatrixXd::Identity(d, d);
  Ad.block<9, 9>(kAlgA, kAlgA) = A.Adjoint();
  Ad.block<6, 6>(kAlgB, kAlgB) = B.Adjoint();
  for (std::size_t i = 0; i < Q.size(); ++i) {
    Ad.block<4, 4>(kAlgQ + 4 * i, kAlgQ + 4 * i) = Q[i].Q.Adjoint();
  }
  return Ad;
}

std::vector<int> VisGroup::ids() const {
  std::vector<int> out;
  out.reserve(Q.size());
  for (const auto& q : Q) out.push_back(q.id);
  return out;
}

}  // namespace eqvio::vislam
