#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace holoreal
{

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Raised when an input violates a documented precondition.
class DomainError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Bicomplex scalar: value + j * step with a second imaginary unit j that
// commutes with i. Evaluating a holomorphic f at z + j*h*v gives
// f(z) + j*h*f'(z)v exactly up to O(h^2), which vanishes in double for h = 1e-30.
// ---------------------------------------------------------------------------

struct Bicomplex
{
  Complex value{};
  Complex step{};

  constexpr Bicomplex() = default;
  constexpr Bicomplex(double v) : value{v} {}
  constexpr Bicomplex(Complex v) : value{v} {}
  constexpr Bicomplex(Complex v, Complex s) : value{v}, step{s} {}
};

inline Bicomplex operator+(Bicomplex a, Bicomplex b) { return {a.value + b.value, a.step + b.step}; }
inline Bicomplex operator-(Bicomplex a, Bicomplex b) { return {a.value - b.value, a.step - b.step}; }
inline Bicomplex operator-(Bicomplex a) { return {-a.value, -a.step}; }
inline Bicomplex operator*(Bicomplex a, Bicomplex b)
{
  return {a.value * b.value - a.step * b.step, a.value * b.step + a.step * b.value};
}
inline Bicomplex operator/(Bicomplex a, Bicomplex b)
{
  const Complex den = b.value * b.value + b.step * b.step;
  const Bicomplex num = a * Bicomplex{b.value, -b.step};
  return {num.value / den, num.step / den};
}
inline Bicomplex& operator+=(Bicomplex& a, Bicomplex b) { return a = a + b; }
inline Bicomplex& operator-=(Bicomplex& a, Bicomplex b) { return a = a - b; }
inline Bicomplex& operator*=(Bicomplex& a, Bicomplex b) { return a = a * b; }

/// Principal branch in the value part.
inline Bicomplex sqrt(Bicomplex a)
{
  const Complex s = std::sqrt(a.value);
  const Complex t = a.step / (2.0 * s);
  return {std::sqrt(a.value + t * t), t};
}

inline constexpr double kComplexStep = 1e-30;

// ---------------------------------------------------------------------------
// 2x2 matrices and 2-vectors over a scalar type.
// ---------------------------------------------------------------------------

template <class T>
struct Mat2
{
  T a11{}, a12{}, a21{}, a22{};

  static Mat2 identity() { return {T(1.0), T(0.0), T(0.0), T(1.0)}; }
  static Mat2 zero() { return {}; }

  T& operator()(std::size_t r, std::size_t c)
  {
    return r == 0 ? (c == 0 ? a11 : a12) : (c == 0 ? a21 : a22);
  }
  const T& operator()(std::size_t r, std::size_t c) const
  {
    return r == 0 ? (c == 0 ? a11 : a12) : (c == 0 ? a21 : a22);
  }

  T trace() const { return a11 + a22; }
  T det() const { return a11 * a22 - a12 * a21; }
  Mat2 transpose() const { return {a11, a21, a12, a22}; }
};

template <class T>
Mat2<T> operator+(const Mat2<T>& a, const Mat2<T>& b)
{
  return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}
template <class T>
Mat2<T> operator-(const Mat2<T>& a, const Mat2<T>& b)
{
  return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}
template <class T>
Mat2<T> operator-(const Mat2<T>& a)
{
  return {-a.a11, -a.a12, -a.a21, -a.a22};
}
template <class T>
Mat2<T> operator*(const Mat2<T>& a, const Mat2<T>& b)
{
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}
template <class T, class S>
Mat2<T> operator*(const S& s, const Mat2<T>& a)
{
  return {T(s) * a.a11, T(s) * a.a12, T(s) * a.a21, T(s) * a.a22};
}

using Mat2C = Mat2<Complex>;

inline Mat2C conj(const Mat2C& a)
{
  return {std::conj(a.a11), std::conj(a.a12), std::conj(a.a21), std::conj(a.a22)};
}
inline Mat2C adjoint(const Mat2C& a) { return conj(a).transpose(); }

/// Frobenius norm.
inline double norm(const Mat2C& a)
{
  return std::sqrt(std::norm(a.a11) + std::norm(a.a12) + std::norm(a.a21) + std::norm(a.a22));
}

inline double max_abs(const Mat2C& a)
{
  return std::max({std::abs(a.a11), std::abs(a.a12), std::abs(a.a21), std::abs(a.a22)});
}

template <class T>
T commutator_trace(const Mat2<T>& xi, const Mat2<T>& a, const Mat2<T>& b)
{
  return (xi * (a * b - b * a)).trace();
}

/// Trace pairing <A,B> = Tr(AB).
template <class T>
T trace_pairing(const Mat2<T>& a, const Mat2<T>& b)
{
  return (a * b).trace();
}

template <class T>
using Vec2 = std::array<T, 2>;

using Vec2C = Vec2<Complex>;

template <class T>
T dot(const Vec2<T>& a, const Vec2<T>& b)
{
  return a[0] * b[0] + a[1] * b[1];
}

inline Vec2C conj(const Vec2C& v) { return {std::conj(v[0]), std::conj(v[1])}; }
inline double norm_sq(const Vec2C& v) { return std::norm(v[0]) + std::norm(v[1]); }
inline double norm(const Vec2C& v) { return std::sqrt(norm_sq(v)); }

template <class T>
Vec2<T> operator*(const Mat2<T>& m, const Vec2<T>& v)
{
  return {m.a11 * v[0] + m.a12 * v[1], m.a21 * v[0] + m.a22 * v[1]};
}
template <class T>
Vec2<T> operator+(const Vec2<T>& a, const Vec2<T>& b)
{
  return {a[0] + b[0], a[1] + b[1]};
}
template <class T>
Vec2<T> operator-(const Vec2<T>& a, const Vec2<T>& b)
{
  return {a[0] - b[0], a[1] - b[1]};
}
template <class T>
Vec2<T> operator-(const Vec2<T>& a)
{
  return {-a[0], -a[1]};
}
template <class T, class S>
Vec2<T> operator*(const S& s, const Vec2<T>& v)
{
  return {T(s) * v[0], T(s) * v[1]};
}

/// q p^T
template <class T>
Mat2<T> outer(const Vec2<T>& q, const Vec2<T>& p)
{
  return {q[0] * p[0], q[0] * p[1], q[1] * p[0], q[1] * p[1]};
}

// ---------------------------------------------------------------------------
// Quaternion units as 2x2 complex matrices.
// ---------------------------------------------------------------------------

struct QuaternionBasis
{
  Mat2C I;
  Mat2C J;
  Mat2C K;
};

/// I = diag(i,-i), J = [[0,1],[-1,0]], K = [[0,i],[i,0]]; IJ = K cyclically.
inline const QuaternionBasis& pauli_basis()
{
  static const QuaternionBasis basis{
      Mat2C{kI, 0.0, 0.0, -kI},
      Mat2C{0.0, 1.0, -1.0, 0.0},
      Mat2C{0.0, kI, kI, 0.0},
  };
  return basis;
}

// ---------------------------------------------------------------------------
// Biquaternions u + Iv + Jw + Kz with complex coefficients.
// ---------------------------------------------------------------------------

struct Biquaternion
{
  Complex u{}, v{}, w{}, z{};

  /// Gamma = |u|^2+|v|^2+|w|^2+|z|^2
  double norm_sq() const { return std::norm(u) + std::norm(v) + std::norm(w) + std::norm(z); }
};

inline Biquaternion operator+(const Biquaternion& a, const Biquaternion& b)
{
  return {a.u + b.u, a.v + b.v, a.w + b.w, a.z + b.z};
}
inline Biquaternion operator-(const Biquaternion& a, const Biquaternion& b)
{
  return {a.u - b.u, a.v - b.v, a.w - b.w, a.z - b.z};
}
inline Biquaternion operator*(Complex s, const Biquaternion& a) { return {s * a.u, s * a.v, s * a.w, s * a.z}; }

/// Hamilton product with commuting complex coefficients.
inline Biquaternion biquat_mul(const Biquaternion& a, const Biquaternion& b)
{
  return {
      a.u * b.u - a.v * b.v - a.w * b.w - a.z * b.z,
      a.u * b.v + a.v * b.u + a.w * b.z - a.z * b.w,
      a.u * b.w - a.v * b.z + a.w * b.u + a.z * b.v,
      a.u * b.z + a.v * b.w - a.w * b.v + a.z * b.u,
  };
}

inline Biquaternion operator*(const Biquaternion& a, const Biquaternion& b) { return biquat_mul(a, b); }

/// 1 -> identity, I -> 𝕀, J -> 𝕁, K -> 𝕂.
inline Mat2C to_matrix(const Biquaternion& b)
{
  const auto& e = pauli_basis();
  return b.u * Mat2C::identity() + b.v * e.I + b.w * e.J + b.z * e.K;
}

// ---------------------------------------------------------------------------
// Conjugate-adjoint of a conjugate-linear map L(X) = A * conj(X) on C^n.
// Returns c with <c, X> = conj(<df, L(X)>) for all X, where <a,X> = sum a_k X_k.
// ---------------------------------------------------------------------------

template <int N>
Eigen::Matrix<Complex, N, 1> conjugate_adjoint(const Eigen::Matrix<Complex, N, N>& antilinear_matrix,
                                               const Eigen::Matrix<Complex, N, 1>& df)
{
  const double scale = std::max(1.0, antilinear_matrix.cwiseAbs().maxCoeff());
  Eigen::FullPivLU<Eigen::Matrix<Complex, N, N>> lu(antilinear_matrix);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible() || std::abs(antilinear_matrix.determinant()) < 1e-12 * std::pow(scale, antilinear_matrix.rows()))
  {
    throw DomainError("conjugate_adjoint: singular map");
  }
  return (antilinear_matrix.transpose() * df).conjugate();
}

// ---------------------------------------------------------------------------
// Complex-step gradient of a holomorphic function of N complex variables.
// f must accept std::array<Bicomplex, N> and return Bicomplex.
// ---------------------------------------------------------------------------

template <std::size_t N, class F>
std::array<Complex, N> complex_step_gradient(F&& f, const std::array<Complex, N>& z)
{
  std::array<Complex, N> grad{};
  std::array<Bicomplex, N> arg;
  for (std::size_t k = 0; k < N; ++k)
  {
    arg[k] = Bicomplex{z[k]};
  }
  for (std::size_t k = 0; k < N; ++k)
  {
    arg[k].step = kComplexStep;
    grad[k] = f(arg).step / kComplexStep;
    arg[k].step = 0.0;
  }
  return grad;
}

} // namespace holoreal
