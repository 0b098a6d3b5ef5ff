#include "wgb/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wgb {

Mesh::Mesh(Eigen::VectorXd nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("Mesh: need at least two nodes");
  if (nodes_(0) != 0.0 || nodes_(nodes_.size() - 1) != 1.0) {
    throw std::invalid_argument("Mesh: nodes must start at 0 and end at 1");
  }
  for (Eigen::Index i = 0; i + 1 < nodes_.size(); ++i) {
    if (!(nodes_(i + 1) > nodes_(i))) {
      throw std::invalid_argument("Mesh: nodes must be strictly increasing (index " +
                                  std::to_string(i) + ")");
    }
  }
}

double Mesh::max_element_size() const {
  double h = 0.0;
  for (int e = 0; e < n_elements(); ++e) h = std::max(h, element_size(e));
  return h;
}

void Mesh::check_element(int e) const {
  if (e < 0 || e >= n_elements()) {
    throw std::invalid_argument("Mesh: element index " + std::to_string(e) + " out of range");
  }
}

double Mesh::map_to_element(int e, double ref_point) const {
  check_element(e);
  return nodes_(e) + (ref_point + 1.0) * 0.5 * element_size(e);
}

double Mesh::jacobian(int e) const {
  check_element(e);
  return 0.5 * element_size(e);
}

int Mesh::locate(double x) const {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("Mesh::locate: x outside [0,1]");
  // first node >= x; the element to its left owns x (ties go left)
  const double* begin = nodes_.data();
  const double* it = std::lower_bound(begin, begin + nodes_.size(), x);
  int idx = static_cast<int>(it - begin);
  return std::clamp(idx - 1, 0, n_elements() - 1);
}

int Mesh::find_node(double x, double tol) const {
  for (int i = 0; i < n_nodes(); ++i) {
    if (std::abs(nodes_(i) - x) <= tol) return i;
  }
  return -1;
}

Mesh build_uniform_mesh(int n_elements) {
  if (n_elements < 1) {
    throw std::invalid_argument("build_uniform_mesh: element count must be positive");
  }
  Eigen::VectorXd nodes(n_elements + 1);
  for (int i = 0; i <= n_elements; ++i) nodes(i) = static_cast<double>(i) / n_elements;
  return Mesh(std::move(nodes));
}

}  // namespace wgb
