#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace relindex {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// A point of the plane; also used for displacements.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;

  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
  cplx as_complex() const { return {x, y}; }
};

/// x ∧ y = x₁y₂ − x₂y₁
inline double wedge(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  precondition,
  convergence,
  tolerance,
  io,
  config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace relindex
