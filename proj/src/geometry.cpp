#include "filament/geometry.hpp"

#include <cmath>
#include <sstream>

#include "filament/errors.hpp"

namespace filament {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonNormalizable: return "NonNormalizable";
    case ErrorKind::ProjectionPole: return "ProjectionPole";
    case ErrorKind::DiscBoundary: return "DiscBoundary";
    case ErrorKind::InsufficientDomain: return "InsufficientDomain";
    case ErrorKind::TooFewNodes: return "TooFewNodes";
    case ErrorKind::BadLength: return "BadLength";
    case ErrorKind::SolverSingular: return "SolverSingular";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::FrameDegenerate: return "FrameDegenerate";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

const char* to_string(Metric m) { return m == Metric::Euclidean ? "euclidean" : "hyperbolic"; }

Vec3 normalize(const Vec3& v, NormTarget target, Metric m) {
  const double q = dot_pm(v, v, m);
  // T on the hyperboloid has q < 0; everything else must be positive.
  const double radicand = target == NormTarget::MetricSign ? sign(m) * q : q;
  if (!(radicand > kNormalizeTolerance)) {
    std::ostringstream msg;
    msg << "signed square " << q << " cannot be scaled to the requested norm";
    throw Error(ErrorKind::NonNormalizable, msg.str());
  }
  return (1.0 / std::sqrt(radicand)) * v;
}

FrameTriad normalize(const FrameTriad& f, Metric m) {
  return {normalize(f.T, NormTarget::MetricSign, m), normalize(f.e1, NormTarget::PlusOne, m),
          normalize(f.e2, NormTarget::PlusOne, m)};
}

std::complex<double> stereo_project(const Vec3& T, Metric) {
  const double denom = 1.0 + T.z;
  if (!(denom > kPoleTolerance)) {
    throw Error(ErrorKind::ProjectionPole, "tangent at the projection pole (0,0,-1)");
  }
  return {T.x / denom, T.y / denom};
}

Vec3 stereo_inverse(std::complex<double> z, Metric m) {
  const double r2 = std::norm(z);
  if (m == Metric::Hyperbolic && !(r2 < 1.0 - kDiscTolerance)) {
    throw Error(ErrorKind::DiscBoundary, "point outside the Poincare disc");
  }
  const double s = sign(m);
  const double denom = 1.0 + s * r2;
  return {2.0 * z.real() / denom, 2.0 * z.imag() / denom, (1.0 - s * r2) / denom};
}

}  // namespace filament
