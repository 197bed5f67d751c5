#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace paraxfem {

/// Partition of the unit interval [0,1] into elements.
///
/// Nodes are strictly increasing with nodes.front() == 0 and
/// nodes.back() == 1. Nonuniform partitions are supported.
class Mesh1D {
public:
    explicit Mesh1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
        if (nodes_.size() < 2)
            throw std::invalid_argument("Mesh1D: need at least two nodes");
        if (nodes_.front() != 0.0 || nodes_.back() != 1.0)
            throw std::invalid_argument("Mesh1D: nodes must span [0,1]");
        for (std::size_t i = 1; i < nodes_.size(); ++i)
            if (!(nodes_[i] > nodes_[i - 1]))
                throw std::invalid_argument("Mesh1D: nodes must be strictly increasing");
    }

    /// Uniform mesh with n elements.
    static Mesh1D uniform(std::size_t n_elements) {
        if (n_elements == 0)
            throw std::invalid_argument("Mesh1D: n_elements must be >= 1");
        std::vector<double> nodes(n_elements + 1);
        for (std::size_t i = 0; i <= n_elements; ++i)
            nodes[i] = static_cast<double>(i) / static_cast<double>(n_elements);
        nodes.front() = 0.0;
        nodes.back() = 1.0;
        return Mesh1D(std::move(nodes));
    }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t element_count() const { return nodes_.size() - 1; }
    double node(std::size_t i) const { return nodes_[i]; }
    const std::vector<double>& nodes() const { return nodes_; }

    double element_left(std::size_t e) const { return nodes_[e]; }
    double element_length(std::size_t e) const { return nodes_[e + 1] - nodes_[e]; }

    double h_max() const {
        double h = 0.0;
        for (std::size_t e = 0; e < element_count(); ++e)
            h = std::max(h, element_length(e));
        return h;
    }

    /// Index of the element containing x (ties at interior nodes go right).
    std::size_t locate(double x) const {
        if (x < 0.0 || x > 1.0)
            throw std::out_of_range("Mesh1D::locate: x outside [0,1]");
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
        std::size_t e = static_cast<std::size_t>(it - nodes_.begin());
        if (e == 0) return 0;
        e -= 1;
        return std::min(e, element_count() - 1);
    }

private:
    std::vector<double> nodes_;
};

} // namespace paraxfem
