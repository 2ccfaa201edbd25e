#include "cardmul/sparsity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cardmul {

DifferenceOperator DifferenceOperator::all_pairs(std::size_t p, double weight) {
    if (p < 2) throw std::invalid_argument("difference_operator: fiber length must be >= 2");
    std::vector<SignedPair> pairs;
    pairs.reserve(p * (p - 1) / 2);
    if (p == 2) {
        pairs.push_back({0, 1});
        return DifferenceOperator(p, std::move(pairs), weight);
    }
    for (std::uint32_t i = 0; i + 1 < p; ++i) pairs.push_back({i, i + 1});
    pairs.push_back({static_cast<std::uint32_t>(p - 1), 0});  // wrap row
    for (std::uint32_t i = 0; i < p; ++i) {
        for (std::uint32_t j = i + 2; j < p; ++j) {
            if (i == 0 && j == p - 1) continue;  // already present as the wrap row
            pairs.push_back({i, j});
        }
    }
    return DifferenceOperator(p, std::move(pairs), weight);
}

DenseMatrix DifferenceOperator::materialize() const {
    DenseMatrix a(rows(), p_);
    for (std::size_t r = 0; r < rows(); ++r) {
        a(r, pairs_[r].plus) = weight_;
        a(r, pairs_[r].minus) = -weight_;
    }
    return a;
}

DenseMatrix DifferenceOperator::apply(const DenseMatrix& w) const {
    if (w.rows() != p_)
        throw std::invalid_argument("apply_difference: operator length does not match rows");
    DenseMatrix out(rows(), w.cols());
    for (std::size_t r = 0; r < rows(); ++r) {
        const auto plus = w.row(pairs_[r].plus);
        const auto minus = w.row(pairs_[r].minus);
        for (std::size_t j = 0; j < w.cols(); ++j)
            out(r, j) = weight_ * (plus[j] - minus[j]);
    }
    return out;
}

double DifferenceOperator::l1_of_apply(const DenseMatrix& w) const {
    if (w.rows() != p_)
        throw std::invalid_argument("l1_of_apply: operator length does not match rows");
    double sum = 0.0;
    for (const auto& pr : pairs_) {
        const auto plus = w.row(pr.plus);
        const auto minus = w.row(pr.minus);
        for (std::size_t j = 0; j < w.cols(); ++j)
            sum += std::fabs(weight_ * (plus[j] - minus[j]));
    }
    return sum;
}

DifferenceOperator difference_operator(std::size_t p) {
    return DifferenceOperator::all_pairs(p);
}

DenseMatrix apply_difference(const DifferenceOperator& op, const DenseMatrix& w) {
    return op.apply(w);
}

GroupSpec GroupSpec::whole(std::size_t p) {
    GroupSpec spec;
    Group g;
    g.members.resize(p);
    std::iota(g.members.begin(), g.members.end(), std::size_t{0});
    spec.groups.push_back(std::move(g));
    return spec;
}

GroupSpec GroupSpec::from_partition(const std::vector<std::vector<std::size_t>>& members,
                                    const std::vector<double>& param_counts) {
    if (members.size() != param_counts.size())
        throw std::invalid_argument("GroupSpec: one parameter count per group required");
    GroupSpec spec;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (param_counts[i] <= 0.0)
            throw std::invalid_argument("GroupSpec: parameter counts must be positive");
        spec.groups.push_back({members[i], param_counts[i], std::sqrt(param_counts[i])});
    }
    return spec;
}

std::size_t GroupSpec::fiber_length() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.members.size();
    return n;
}

void GroupSpec::validate(std::size_t p) const {
    std::vector<bool> seen(p, false);
    for (const auto& g : groups) {
        if (g.members.empty()) throw std::invalid_argument("GroupSpec: empty group");
        for (std::size_t m : g.members) {
            if (m >= p) throw std::invalid_argument("GroupSpec: member index out of range");
            if (seen[m]) throw std::invalid_argument("GroupSpec: groups must be disjoint");
            seen[m] = true;
        }
    }
    for (std::size_t i = 0; i < p; ++i)
        if (!seen[i]) throw std::invalid_argument("GroupSpec: groups must cover all rows");
}

std::optional<DenseMatrix> grouped_difference(const GroupSpec& spec, const DenseMatrix& w) {
    spec.validate(w.rows());
    std::size_t out_rows = 0;
    for (const auto& g : spec.groups)
        out_rows += g.members.size() * (g.members.size() - 1) / 2;
    if (out_rows == 0) return std::nullopt;

    DenseMatrix out(out_rows, w.cols());
    std::size_t r = 0;
    for (const auto& g : spec.groups) {
        if (g.members.size() < 2) continue;
        const auto op = DifferenceOperator::all_pairs(g.members.size(), g.weight);
        for (const auto& pr : op.pairs()) {
            const auto plus = w.row(g.members[pr.plus]);
            const auto minus = w.row(g.members[pr.minus]);
            for (std::size_t j = 0; j < w.cols(); ++j)
                out(r, j) = g.weight * (plus[j] - minus[j]);
            ++r;
        }
    }
    return out;
}

std::optional<DenseMatrix> materialize_grouped(const GroupSpec& spec) {
    const std::size_t p = spec.fiber_length();
    spec.validate(p);
    std::size_t out_rows = 0;
    for (const auto& g : spec.groups)
        out_rows += g.members.size() * (g.members.size() - 1) / 2;
    if (out_rows == 0) return std::nullopt;
    DenseMatrix a(out_rows, p);
    std::size_t r = 0;
    for (const auto& g : spec.groups) {
        if (g.members.size() < 2) continue;
        const auto op = DifferenceOperator::all_pairs(g.members.size(), g.weight);
        for (const auto& pr : op.pairs()) {
            a(r, g.members[pr.plus]) = g.weight;
            a(r, g.members[pr.minus]) = -g.weight;
            ++r;
        }
    }
    return a;
}

namespace {

// Mean of already-constant inputs is returned bit-exactly, which makes the
// projections idempotent rather than idempotent-up-to-rounding.
double stable_mean(const DenseMatrix& w, std::span<const std::size_t> rows, std::size_t j) {
    bool constant = true;
    for (std::size_t r : rows)
        if (w(r, j) != w(rows[0], j)) {
            constant = false;
            break;
        }
    if (constant) return w(rows[0], j);
    double sum = 0.0;
    for (std::size_t r : rows) sum += w(r, j);
    return sum / static_cast<double>(rows.size());
}

}  // namespace

DenseMatrix project_kernel(const DenseMatrix& w) {
    DenseMatrix out(w.rows(), w.cols());
    std::vector<std::size_t> all(w.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (std::size_t j = 0; j < w.cols(); ++j) {
        const double mean = stable_mean(w, all, j);
        for (std::size_t i = 0; i < w.rows(); ++i) out(i, j) = mean;
    }
    return out;
}

DenseMatrix project_kernel(const DenseMatrix& w, const GroupSpec& spec) {
    spec.validate(w.rows());
    DenseMatrix out(w.rows(), w.cols());
    for (const auto& g : spec.groups) {
        for (std::size_t j = 0; j < w.cols(); ++j) {
            const double mean = stable_mean(w, g.members, j);
            for (std::size_t m : g.members) out(m, j) = mean;
        }
    }
    return out;
}

ParamStack::ParamStack(std::vector<DenseMatrix> ls) : layers(std::move(ls)) {
    if (layers.empty()) throw std::invalid_argument("ParamStack: at least one layer required");
    for (std::size_t i = 0; i + 1 < layers.size(); ++i)
        if (layers[i].cols() != layers[i + 1].rows())
            throw std::invalid_argument("ParamStack: adjacent layer dimensions do not agree");
}

std::size_t ParamStack::parameter_count() const {
    std::size_t n = 0;
    for (const auto& w : layers) n += w.size();
    return n;
}

namespace {

double l1(const DenseMatrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += std::fabs(v);
    return s;
}

double grouped_l1_of_difference(const GroupSpec& spec, const DenseMatrix& w) {
    spec.validate(w.rows());
    double sum = 0.0;
    for (const auto& g : spec.groups) {
        if (g.members.size() < 2) continue;
        const auto op = DifferenceOperator::all_pairs(g.members.size(), g.weight);
        for (const auto& pr : op.pairs()) {
            const auto plus = w.row(g.members[pr.plus]);
            const auto minus = w.row(g.members[pr.minus]);
            for (std::size_t j = 0; j < w.cols(); ++j)
                sum += std::fabs(g.weight * (plus[j] - minus[j]));
        }
    }
    return sum;
}

}  // namespace

double regularizer_h(const ParamStack& theta, double nu) {
    if (nu <= 0.0) throw std::invalid_argument("regularizer_h: nu must be positive");
    double h = 0.0;
    for (const auto& w : theta.layers) {
        if (w.rows() >= 2) h += difference_operator(w.rows()).l1_of_apply(w);
        h += nu * l1(project_kernel(w));
    }
    return h;
}

double regularizer_h(const ParamStack& theta, double nu, std::span<const GroupSpec> per_layer) {
    if (nu <= 0.0) throw std::invalid_argument("regularizer_h: nu must be positive");
    if (per_layer.size() != theta.layers.size())
        throw std::invalid_argument("regularizer_h: one group spec per layer required");
    double h = 0.0;
    for (std::size_t l = 0; l < theta.layers.size(); ++l) {
        const auto& w = theta.layers[l];
        h += grouped_l1_of_difference(per_layer[l], w);
        h += nu * l1(project_kernel(w, per_layer[l]));
    }
    return h;
}

DenseMatrix project_cardinality(const DenseMatrix& w, std::size_t k) {
    if (k < 1) throw std::invalid_argument("project_cardinality: k must be >= 1");
    const std::size_t rows = w.rows();
    if (k >= rows) return w;

    DenseMatrix out(rows, w.cols());
    std::vector<std::size_t> order(rows);
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < w.cols(); ++j) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        // Ties break on the original row index to keep the split deterministic.
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return w(a, j) < w(b, j) || (w(a, j) == w(b, j) && a < b);
        });
        const std::size_t base = rows / k;
        const std::size_t extra = rows % k;  // first `extra` partitions get one more
        std::size_t start = 0;
        for (std::size_t part = 0; part < k; ++part) {
            const std::size_t len = base + (part < extra ? 1 : 0);
            members.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                           order.begin() + static_cast<std::ptrdiff_t>(start + len));
            // Summation runs in original row order, matching project_kernel
            // in the k = 1 case.
            std::sort(members.begin(), members.end());
            const double mean = stable_mean(w, members, j);
            for (std::size_t m : members) out(m, j) = mean;
            start += len;
        }
    }
    return out;
}

double one_to_one_norm(const DenseMatrix& b) {
    double best = 0.0;
    for (std::size_t j = 0; j < b.cols(); ++j) {
        double colsum = 0.0;
        for (std::size_t i = 0; i < b.rows(); ++i) colsum += std::fabs(b(i, j));
        best = std::max(best, colsum);
    }
    return best;
}

double m_bound_whole(double param_count) {
    if (param_count <= 0.0) throw std::invalid_argument("m_bound: parameter count must be positive");
    return 2.0 / std::sqrt(param_count);
}

double m_bound_grouped(const GroupSpec& spec) {
    if (spec.groups.empty()) throw std::invalid_argument("m_bound: no groups");
    double best = 0.0;
    for (const auto& g : spec.groups) {
        if (g.param_count <= 0.0)
            throw std::invalid_argument("m_bound: parameter counts must be positive");
        best = std::max(best, 2.0 / (std::sqrt(g.param_count) *
                                     static_cast<double>(g.members.size())));
    }
    return best;
}

void LambdaConfig::validate() const {
    if (samples == 0 || param_count == 0)
        throw std::invalid_argument("lambda_bound: n and P must be positive");
    if (a_lip <= 0.0 || x_norm_n <= 0.0 || c <= 0.0 || hidden_layers == 0)
        throw std::invalid_argument("lambda_bound: constants must be positive");
    if (m_g < 0.0) throw std::invalid_argument("lambda_bound: M_G must be nonnegative");
    if (m_g < 1.0 && nu < 1.0 / (1.0 - m_g) - 1e-12)
        throw std::invalid_argument("lambda_bound: nu must be >= 1/(1 - M_G)");
}

double lambda_bound(const LambdaConfig& cfg) {
    cfg.validate();
    const double L = static_cast<double>(cfg.hidden_layers);
    const double n = static_cast<double>(cfg.samples);
    const double P = static_cast<double>(cfg.param_count);
    return cfg.c * (cfg.m_g + 1.0) * std::pow(cfg.a_lip, 2.0 * L) * cfg.x_norm_n * cfg.x_norm_n *
           std::pow(std::sqrt(2.0) / L, 2.0 * L - 1.0) * std::sqrt(std::log(2.0 * P)) *
           std::log(2.0 * n) / std::sqrt(n);
}

}  // namespace cardmul
