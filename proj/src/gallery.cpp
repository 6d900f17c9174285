#include "crm/gallery.hpp"

#include <cmath>

namespace crm {

namespace {

GalleryEntry linear_entry(std::string name, std::string description, Matrix a) {
  GalleryEntry e;
  e.name = std::move(name);
  e.description = std::move(description);
  e.domain_chart = ChartManifold::euclidean(static_cast<int>(a.cols()));
  e.codomain_chart = ChartManifold::euclidean(static_cast<int>(a.rows()));
  e.spec.map = [a](const Vector& x) -> Vector { return a * x; };
  e.spec.jacobian = [a](const Vector&) { return a; };
  for (int i = 0; i < a.cols(); ++i) e.default_grid.push_back({-1.0, 1.0, 3});
  return e;
}

GalleryEntry curve_t3_t6(std::string name, std::string description) {
  GalleryEntry e;
  e.name = std::move(name);
  e.description = std::move(description);
  e.domain_chart = ChartManifold::euclidean(1);
  e.codomain_chart = ChartManifold::euclidean(2);
  e.spec.map = [](const Vector& t) {
    Vector y(2);
    y << std::pow(t(0), 3), std::pow(t(0), 6);
    return y;
  };
  e.spec.jacobian = [](const Vector& t) {
    Matrix j(2, 1);
    j << 3 * t(0) * t(0), 6 * std::pow(t(0), 5);
    return j;
  };
  e.default_grid = {{0.25, 2.0, 15}};
  e.expected.geometric_everywhere = true;
  e.expected.constant_rank = 1;
  return e;
}

std::vector<GalleryEntry> build_gallery() {
  std::vector<GalleryEntry> entries;

  {
    Matrix a(2, 3);
    a << 2, 2, 0, 0, 0, 2;
    GalleryEntry e = linear_entry(
        "example7", "f(x,y,z) = 2(x+y, z); Conf subspace is not unique", a);
    e.expected.geometric_everywhere = true;
    e.expected.constant_rank = 2;
    e.expected.factor = 4.0;
    entries.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.name = "example8";
    e.description =
        "f(x1,x2,x3,x4) = (e^{x3}(x1-x2), 0, 0, e^{x3}(x4-x2)); kernel and "
        "Conf subspace are not orthogonal";
    e.domain_chart = ChartManifold::euclidean(4);
    e.codomain_chart = ChartManifold::euclidean(4);
    e.spec.map = [](const Vector& x) {
      Vector y = Vector::Zero(4);
      const double s = std::exp(x(2));
      y(0) = s * (x(0) - x(1));
      y(3) = s * (x(3) - x(1));
      return y;
    };
    e.spec.jacobian = [](const Vector& x) {
      Matrix j = Matrix::Zero(4, 4);
      const double s = std::exp(x(2));
      j(0, 0) = s;
      j(0, 1) = -s;
      j(0, 2) = s * (x(0) - x(1));
      j(3, 1) = -s;
      j(3, 2) = s * (x(3) - x(1));
      j(3, 3) = s;
      return j;
    };
    e.default_grid = {{-1, 1, 5}, {-1, 1, 5}, {-1, 1, 5}, {-1, 1, 5}};
    e.expected.geometric_everywhere = true;
    e.expected.constant_rank = 2;
    entries.push_back(std::move(e));
  }

  entries.push_back(curve_t3_t6(
      "example10-curve", "c(t) = (t^3, t^6) on t > 0; conformal immersion"));

  {
    const double angle = 0.7;
    Matrix q(2, 2);
    q << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    GalleryEntry e = linear_entry(
        "example11-orthogonal", "3 times a rotation; conformal isomorphism",
        3.0 * q);
    e.expected.geometric_everywhere = true;
    e.expected.constant_rank = 2;
    e.expected.factor = 9.0;
    entries.push_back(std::move(e));
  }

  {
    Matrix a(2, 2);
    a << 2, 0, 0, 3;
    GalleryEntry e = linear_entry(
        "example12-diag", "f(x,y) = (2x,3y); harmonic but nowhere geometric", a);
    e.expected.geometric_everywhere = false;
    e.expected.constant_rank = 2;
    entries.push_back(std::move(e));
  }

  entries.push_back(curve_t3_t6(
      "example12-curve", "c(t) = (t^3, t^6) on t > 0; geometric but not harmonic"));

  {
    GalleryEntry e;
    e.name = "example14-f";
    e.description = "f(x) = (x^2+x, x^2); immersion on [-1,1]";
    e.domain_chart = ChartManifold::euclidean(1);
    e.codomain_chart = ChartManifold::euclidean(2);
    e.spec.map = [](const Vector& x) {
      Vector y(2);
      y << x(0) * x(0) + x(0), x(0) * x(0);
      return y;
    };
    e.spec.jacobian = [](const Vector& x) {
      Matrix j(2, 1);
      j << 2 * x(0) + 1, 2 * x(0);
      return j;
    };
    e.default_grid = {{-1, 1, 101}};
    e.expected.geometric_everywhere = true;
    e.expected.constant_rank = 1;
    entries.push_back(std::move(e));
  }

  {
    Matrix a(1, 2);
    a << 1, 0;
    GalleryEntry e =
        linear_entry("example14-g", "g(x,y) = x; Riemannian submersion", a);
    e.expected.geometric_everywhere = true;
    e.expected.constant_rank = 1;
    e.expected.factor = 1.0;
    entries.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.name = "example14-composite";
    e.description =
        "g∘f(x) = x^2+x; gradient vanishes at x = -1/2, so the rank drops";
    e.domain_chart = ChartManifold::euclidean(1);
    e.codomain_chart = ChartManifold::euclidean(1);
    e.spec.map = [](const Vector& x) {
      Vector y(1);
      y << x(0) * x(0) + x(0);
      return y;
    };
    e.spec.jacobian = [](const Vector& x) {
      Matrix j(1, 1);
      j << 2 * x(0) + 1;
      return j;
    };
    e.default_grid = {{-1, 1, 101}};
    e.expected.rank_drops = true;
    entries.push_back(std::move(e));
  }

  {
    Matrix a(1, 2);
    a << 1, 0;
    GalleryEntry e = linear_entry(
        "scalar-coordinate", "f(x,y) = x; scalar field with unit gradient", a);
    e.expected.geometric_everywhere = true;
    e.expected.constant_rank = 1;
    e.expected.factor = 1.0;
    entries.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.name = "scalar-halfnormsq";
    e.description =
        "f(x,y,z) = |x|^2/2; gradient vanishes at the origin, so the rank drops";
    e.domain_chart = ChartManifold::euclidean(3);
    e.codomain_chart = ChartManifold::euclidean(1);
    e.spec.map = [](const Vector& x) {
      Vector y(1);
      y << 0.5 * x.squaredNorm();
      return y;
    };
    e.spec.jacobian = [](const Vector& x) { return Matrix(x.transpose()); };
    e.default_grid = {{-1, 1, 5}, {-1, 1, 5}, {-1, 1, 5}};
    e.expected.rank_drops = true;
    entries.push_back(std::move(e));
  }

  return entries;
}

}  // namespace

const std::vector<GalleryEntry>& gallery() {
  static const std::vector<GalleryEntry> entries = build_gallery();
  return entries;
}

const GalleryEntry& gallery_entry(const std::string& name) {
  for (const GalleryEntry& e : gallery()) {
    if (e.name == name) return e;
  }
  throw std::invalid_argument("unknown gallery map: " + name);
}

}  // namespace crm
