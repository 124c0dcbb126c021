#pragma once

#include <cstddef>
#include <vector>

namespace chemoflow {

// Uniform rectangle [0,Lx] x [0,Ly] split into nx x ny cells.
struct DomainSpec {
  double Lx = 1.0;
  double Ly = 1.0;
  int nx = 64;
  int ny = 64;

  double dx() const { return Lx / nx; }
  double dy() const { return Ly / ny; }
  double cell_area() const { return dx() * dy(); }
  double area() const { return Lx * Ly; }

  bool operator==(const DomainSpec&) const = default;
};

// Cell-centered scalar, value at ((i+1/2)dx, (j+1/2)dy), row-major with i fastest.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const DomainSpec& dom, double fill = 0.0)
      : dom_(dom), v_(static_cast<size_t>(dom.nx) * dom.ny, fill) {}

  double& at(int i, int j) { return v_[static_cast<size_t>(j) * dom_.nx + i]; }
  double at(int i, int j) const { return v_[static_cast<size_t>(j) * dom_.nx + i]; }

  const DomainSpec& domain() const { return dom_; }
  int nx() const { return dom_.nx; }
  int ny() const { return dom_.ny; }
  size_t size() const { return v_.size(); }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

 private:
  DomainSpec dom_{};
  std::vector<double> v_;
};

// MAC-staggered velocity: u on vertical faces ((nx+1) x ny), v on horizontal
// faces (nx x (ny+1)). Boundary faces hold the no-slip value 0.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const DomainSpec& dom)
      : dom_(dom),
        u_(static_cast<size_t>(dom.nx + 1) * dom.ny, 0.0),
        v_(static_cast<size_t>(dom.nx) * (dom.ny + 1), 0.0) {}

  double& u(int i, int j) { return u_[static_cast<size_t>(j) * (dom_.nx + 1) + i]; }
  double u(int i, int j) const { return u_[static_cast<size_t>(j) * (dom_.nx + 1) + i]; }
  double& v(int i, int j) { return v_[static_cast<size_t>(j) * dom_.nx + i]; }
  double v(int i, int j) const { return v_[static_cast<size_t>(j) * dom_.nx + i]; }

  const DomainSpec& domain() const { return dom_; }
  int nx() const { return dom_.nx; }
  int ny() const { return dom_.ny; }

  std::vector<double>& u_values() { return u_; }
  const std::vector<double>& u_values() const { return u_; }
  std::vector<double>& v_values() { return v_; }
  const std::vector<double>& v_values() const { return v_; }

  // Zero the faces lying on the walls.
  void enforce_no_slip();

 private:
  DomainSpec dom_{};
  std::vector<double> u_;
  std::vector<double> v_;
};

}  // namespace chemoflow
