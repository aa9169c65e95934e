#include "qcat/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qcat {

namespace {

std::size_t product_of(std::span<const int> dims) {
    std::size_t p = 1;
    for (int d : dims) p *= static_cast<std::size_t>(d);
    return p;
}

// Dimension-only view used while contracting; legs carry no direction here.
struct NdArray {
    std::vector<int> dims;
    std::vector<Complex> data;

    std::size_t size() const { return data.size(); }
};

NdArray permute_axes(const NdArray& a, std::span<const int> perm) {
    NdArray out;
    out.dims.resize(a.dims.size());
    for (std::size_t i = 0; i < perm.size(); ++i) out.dims[i] = a.dims[perm[i]];
    out.data.resize(a.data.size());
    if (a.dims.empty()) {
        out.data = a.data;
        return out;
    }
    const std::size_t rank = a.dims.size();
    std::vector<std::size_t> in_strides(rank, 1);
    for (std::size_t i = rank - 1; i > 0; --i)
        in_strides[i - 1] = in_strides[i] * static_cast<std::size_t>(a.dims[i]);
    std::vector<int> idx(rank, 0);
    std::size_t flat_out = 0;
    while (true) {
        std::size_t flat_in = 0;
        for (std::size_t i = 0; i < rank; ++i)
            flat_in += static_cast<std::size_t>(idx[i]) * in_strides[perm[i]];
        out.data[flat_out++] = a.data[flat_in];
        std::size_t axis = rank;
        while (axis > 0) {
            --axis;
            if (++idx[axis] < out.dims[axis]) break;
            idx[axis] = 0;
            if (axis == 0) return out;
        }
        if (flat_out == out.data.size()) break;
    }
    return out;
}

}  // namespace

ComplexTensor::ComplexTensor(std::vector<LegType> legs, std::vector<Complex> amplitudes)
    : legs_(std::move(legs)), amplitudes_(std::move(amplitudes)) {
    bool seen_input = false;
    std::size_t expected = 1;
    for (const LegType& leg : legs_) {
        if (leg.dim < 1) throw DimensionError("tensor leg dimension must be >= 1");
        if (leg.direction == LegDirection::input) {
            seen_input = true;
        } else {
            if (seen_input) throw SignatureError("tensor legs must list outputs before inputs");
            ++n_outputs_;
        }
        expected *= static_cast<std::size_t>(leg.dim);
    }
    if (amplitudes_.size() != expected)
        throw DimensionError("amplitude count does not match the product of leg dimensions");
}

ComplexTensor ComplexTensor::scalar(Complex value) {
    return ComplexTensor({}, {value});
}

ComplexTensor ComplexTensor::identity(int dim) {
    std::vector<Complex> amps(static_cast<std::size_t>(dim) * dim, Complex(0.0));
    for (int k = 0; k < dim; ++k) amps[static_cast<std::size_t>(k) * dim + k] = 1.0;
    return ComplexTensor({{LegDirection::output, dim}, {LegDirection::input, dim}}, std::move(amps));
}

ComplexTensor ComplexTensor::from_matrix(std::vector<int> out_dims, std::vector<int> in_dims,
                                         std::vector<Complex> entries) {
    std::vector<LegType> legs;
    legs.reserve(out_dims.size() + in_dims.size());
    for (int d : out_dims) legs.push_back({LegDirection::output, d});
    for (int d : in_dims) legs.push_back({LegDirection::input, d});
    return ComplexTensor(std::move(legs), std::move(entries));
}

std::vector<int> ComplexTensor::output_dims() const {
    std::vector<int> dims;
    dims.reserve(n_outputs_);
    for (int i = 0; i < n_outputs_; ++i) dims.push_back(legs_[i].dim);
    return dims;
}

std::vector<int> ComplexTensor::input_dims() const {
    std::vector<int> dims;
    for (std::size_t i = n_outputs_; i < legs_.size(); ++i) dims.push_back(legs_[i].dim);
    return dims;
}

std::size_t ComplexTensor::output_size() const {
    std::size_t p = 1;
    for (int i = 0; i < n_outputs_; ++i) p *= static_cast<std::size_t>(legs_[i].dim);
    return p;
}

std::size_t ComplexTensor::input_size() const {
    std::size_t p = 1;
    for (std::size_t i = n_outputs_; i < legs_.size(); ++i) p *= static_cast<std::size_t>(legs_[i].dim);
    return p;
}

Complex ComplexTensor::scalar_value() const {
    if (!is_scalar()) throw SignatureError("tensor is not a scalar");
    return amplitudes_[0];
}

std::size_t ComplexTensor::flat_index(std::span<const int> indices) const {
    if (indices.size() != legs_.size()) throw DimensionError("wrong number of indices");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < legs_.size(); ++i) {
        if (indices[i] < 0 || indices[i] >= legs_[i].dim) throw DimensionError("index out of range");
        flat = flat * static_cast<std::size_t>(legs_[i].dim) + static_cast<std::size_t>(indices[i]);
    }
    return flat;
}

double ComplexTensor::max_abs() const {
    double m = 0.0;
    for (const Complex& c : amplitudes_) m = std::max(m, std::abs(c));
    return m;
}

double ComplexTensor::norm() const {
    double s = 0.0;
    for (const Complex& c : amplitudes_) s += std::norm(c);
    return std::sqrt(s);
}

ComplexTensor kron(const ComplexTensor& a, const ComplexTensor& b) {
    std::vector<LegType> legs;
    legs.reserve(a.legs().size() + b.legs().size());
    for (int i = 0; i < a.n_outputs(); ++i) legs.push_back(a.legs()[i]);
    for (int i = 0; i < b.n_outputs(); ++i) legs.push_back(b.legs()[i]);
    for (std::size_t i = a.n_outputs(); i < a.legs().size(); ++i) legs.push_back(a.legs()[i]);
    for (std::size_t i = b.n_outputs(); i < b.legs().size(); ++i) legs.push_back(b.legs()[i]);

    const std::size_t ao = a.output_size(), ai = a.input_size();
    const std::size_t bo = b.output_size(), bi = b.input_size();
    std::vector<Complex> amps(ao * bo * ai * bi);
    for (std::size_t r1 = 0; r1 < ao; ++r1)
        for (std::size_t r2 = 0; r2 < bo; ++r2)
            for (std::size_t c1 = 0; c1 < ai; ++c1)
                for (std::size_t c2 = 0; c2 < bi; ++c2)
                    amps[((r1 * bo + r2) * ai + c1) * bi + c2] =
                        a.amplitudes()[r1 * ai + c1] * b.amplitudes()[r2 * bi + c2];
    return ComplexTensor(std::move(legs), std::move(amps));
}

ComplexTensor compose(const ComplexTensor& g, const ComplexTensor& f) {
    const std::vector<int> f_out = f.output_dims();
    const std::vector<int> g_in = g.input_dims();
    if (f_out.size() != g_in.size()) {
        std::ostringstream os;
        os << "compose: f has " << f_out.size() << " output legs but g has " << g_in.size()
           << " input legs";
        throw DimensionError(os.str());
    }
    for (std::size_t i = 0; i < f_out.size(); ++i) {
        if (f_out[i] != g_in[i]) {
            std::ostringstream os;
            os << "compose: leg " << i << " mismatch (f output dim " << f_out[i]
               << " vs g input dim " << g_in[i] << ")";
            throw DimensionError(os.str());
        }
    }

    std::vector<LegType> legs;
    for (int i = 0; i < g.n_outputs(); ++i) legs.push_back(g.legs()[i]);
    for (std::size_t i = f.n_outputs(); i < f.legs().size(); ++i) legs.push_back(f.legs()[i]);

    const std::size_t rows = g.output_size();
    const std::size_t inner = g.input_size();
    const std::size_t cols = f.input_size();
    std::vector<Complex> amps(rows * cols, Complex(0.0));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = 0; k < inner; ++k) {
            const Complex gv = g.amplitudes()[r * inner + k];
            if (gv == Complex(0.0)) continue;
            for (std::size_t c = 0; c < cols; ++c)
                amps[r * cols + c] += gv * f.amplitudes()[k * cols + c];
        }
    return ComplexTensor(std::move(legs), std::move(amps));
}

ComplexTensor dagger(const ComplexTensor& t) {
    std::vector<LegType> legs;
    legs.reserve(t.legs().size());
    for (std::size_t i = t.n_outputs(); i < t.legs().size(); ++i)
        legs.push_back({LegDirection::output, t.legs()[i].dim});
    for (int i = 0; i < t.n_outputs(); ++i) legs.push_back({LegDirection::input, t.legs()[i].dim});

    const std::size_t rows = t.output_size(), cols = t.input_size();
    std::vector<Complex> amps(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            amps[c * rows + r] = std::conj(t.amplitudes()[r * cols + c]);
    return ComplexTensor(std::move(legs), std::move(amps));
}

ComplexTensor transpose_cb(const ComplexTensor& t) {
    std::vector<LegType> legs;
    legs.reserve(t.legs().size());
    for (std::size_t i = t.n_outputs(); i < t.legs().size(); ++i)
        legs.push_back({LegDirection::output, t.legs()[i].dim});
    for (int i = 0; i < t.n_outputs(); ++i) legs.push_back({LegDirection::input, t.legs()[i].dim});

    const std::size_t rows = t.output_size(), cols = t.input_size();
    std::vector<Complex> amps(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) amps[c * rows + r] = t.amplitudes()[r * cols + c];
    return ComplexTensor(std::move(legs), std::move(amps));
}

double max_abs_diff(const ComplexTensor& a, const ComplexTensor& b) {
    if (a.legs() != b.legs()) throw SignatureError("tensors do not share a leg signature");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
    return m;
}

bool equal_within(const ComplexTensor& a, const ComplexTensor& b, double tol) {
    return max_abs_diff(a, b) <= tol;
}

std::optional<Complex> proportional_within(const ComplexTensor& a, const ComplexTensor& b,
                                           double tol) {
    if (a.legs() != b.legs()) throw SignatureError("tensors do not share a leg signature");
    std::size_t pivot = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double m = std::abs(b.amplitudes()[i]);
        if (m > best) {
            best = m;
            pivot = i;
        }
    }
    if (best == 0.0) throw QcatError("proportional_within: reference tensor is zero");
    const Complex lambda = a.amplitudes()[pivot] / b.amplitudes()[pivot];
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a.amplitudes()[i] - lambda * b.amplitudes()[i]) > tol) return std::nullopt;
    return lambda;
}

namespace {

constexpr std::size_t kContractionSizeCap = std::size_t(1) << 24;

struct Working {
    std::vector<int> labels;  // one per axis
    NdArray arr;
};

// Sums the diagonal over every label appearing twice inside one tensor.
void trace_repeated(Working& w) {
    for (;;) {
        int label = -1;
        std::size_t ax1 = 0, ax2 = 0;
        for (std::size_t i = 0; i < w.labels.size() && label < 0; ++i)
            for (std::size_t j = i + 1; j < w.labels.size(); ++j)
                if (w.labels[i] == w.labels[j]) {
                    label = w.labels[i];
                    ax1 = i;
                    ax2 = j;
                    break;
                }
        if (label < 0) return;

        // Move the traced pair to the back, then sum the diagonal.
        std::vector<int> perm;
        for (std::size_t i = 0; i < w.labels.size(); ++i)
            if (i != ax1 && i != ax2) perm.push_back(static_cast<int>(i));
        perm.push_back(static_cast<int>(ax1));
        perm.push_back(static_cast<int>(ax2));
        NdArray moved = permute_axes(w.arr, perm);
        const int d = moved.dims.back();
        const std::size_t outer = moved.size() / (static_cast<std::size_t>(d) * d);
        NdArray traced;
        traced.dims.assign(moved.dims.begin(), moved.dims.end() - 2);
        traced.data.assign(outer, Complex(0.0));
        for (std::size_t o = 0; o < outer; ++o)
            for (int k = 0; k < d; ++k)
                traced.data[o] += moved.data[(o * d + k) * d + k];
        std::vector<int> labels;
        for (std::size_t i = 0; i < w.labels.size(); ++i)
            if (i != ax1 && i != ax2) labels.push_back(w.labels[i]);
        w.arr = std::move(traced);
        w.labels = std::move(labels);
    }
}

Working contract_pair(const Working& a, const Working& b) {
    std::vector<int> shared;
    for (int la : a.labels)
        for (int lb : b.labels)
            if (la == lb) shared.push_back(la);

    // Permute a: free axes first, shared last; b: shared first (same order), free last.
    std::vector<int> perm_a, perm_b;
    std::vector<int> out_labels;
    for (std::size_t i = 0; i < a.labels.size(); ++i)
        if (std::find(shared.begin(), shared.end(), a.labels[i]) == shared.end()) {
            perm_a.push_back(static_cast<int>(i));
            out_labels.push_back(a.labels[i]);
        }
    std::size_t shared_size = 1;
    for (int s : shared) {
        const auto it = std::find(a.labels.begin(), a.labels.end(), s);
        perm_a.push_back(static_cast<int>(it - a.labels.begin()));
        shared_size *= static_cast<std::size_t>(a.arr.dims[it - a.labels.begin()]);
    }
    for (int s : shared) {
        const auto it = std::find(b.labels.begin(), b.labels.end(), s);
        perm_b.push_back(static_cast<int>(it - b.labels.begin()));
    }
    for (std::size_t i = 0; i < b.labels.size(); ++i)
        if (std::find(shared.begin(), shared.end(), b.labels[i]) == shared.end()) {
            perm_b.push_back(static_cast<int>(i));
            out_labels.push_back(b.labels[i]);
        }

    const NdArray pa = permute_axes(a.arr, perm_a);
    const NdArray pb = permute_axes(b.arr, perm_b);
    const std::size_t rows = pa.size() / shared_size;
    const std::size_t cols = pb.size() / shared_size;
    if (rows * cols > kContractionSizeCap)
        throw NetworkTooLarge("intermediate tensor exceeds the dense contraction cap");

    Working out;
    out.labels = std::move(out_labels);
    out.arr.dims.assign(pa.dims.begin(), pa.dims.end() - static_cast<long>(shared.size()));
    out.arr.dims.insert(out.arr.dims.end(), pb.dims.begin() + static_cast<long>(shared.size()),
                        pb.dims.end());
    out.arr.data.assign(rows * cols, Complex(0.0));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = 0; k < shared_size; ++k) {
            const Complex av = pa.data[r * shared_size + k];
            if (av == Complex(0.0)) continue;
            for (std::size_t c = 0; c < cols; ++c)
                out.arr.data[r * cols + c] += av * pb.data[k * cols + c];
        }
    return out;
}

}  // namespace

ComplexTensor contract(std::span<const ComplexTensor> nodes, std::span<const TensorEdge> edges,
                       std::span<const TensorLegRef> boundary,
                       const std::vector<std::size_t>* edge_order) {
    // Assign one label per edge, then per boundary leg; record leg usage.
    std::vector<std::vector<int>> node_labels(nodes.size());
    std::vector<std::vector<int>> usage(nodes.size());
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        node_labels[n].assign(nodes[n].legs().size(), -1);
        usage[n].assign(nodes[n].legs().size(), 0);
    }
    auto leg_dim = [&](const TensorLegRef& ref) {
        if (ref.node < 0 || static_cast<std::size_t>(ref.node) >= nodes.size())
            throw NetworkError("edge references a nonexistent node");
        const auto& legs = nodes[ref.node].legs();
        if (ref.leg < 0 || static_cast<std::size_t>(ref.leg) >= legs.size())
            throw NetworkError("edge references a nonexistent leg");
        return legs[ref.leg].dim;
    };

    int next_label = 0;
    for (const TensorEdge& e : edges) {
        if (leg_dim(e.a) != leg_dim(e.b)) {
            std::ostringstream os;
            os << "edge joins legs of unequal dimension: node " << e.a.node << " leg " << e.a.leg
               << " (dim " << leg_dim(e.a) << ") vs node " << e.b.node << " leg " << e.b.leg
               << " (dim " << leg_dim(e.b) << ")";
            throw DimensionError(os.str());
        }
        node_labels[e.a.node][e.a.leg] = next_label;
        node_labels[e.b.node][e.b.leg] = next_label;
        ++usage[e.a.node][e.a.leg];
        ++usage[e.b.node][e.b.leg];
        ++next_label;
    }
    const int first_boundary_label = next_label;
    for (const TensorLegRef& ref : boundary) {
        leg_dim(ref);
        node_labels[ref.node][ref.leg] = next_label++;
        ++usage[ref.node][ref.leg];
    }
    for (std::size_t n = 0; n < nodes.size(); ++n)
        for (std::size_t l = 0; l < usage[n].size(); ++l) {
            if (usage[n][l] == 0) {
                std::ostringstream os;
                os << "dangling leg: node " << n << " leg " << l;
                throw NetworkError(os.str());
            }
            if (usage[n][l] > 1) {
                std::ostringstream os;
                os << "leg used more than once: node " << n << " leg " << l;
                throw NetworkError(os.str());
            }
        }

    std::vector<Working> pool;
    pool.reserve(nodes.size());
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        Working w;
        w.labels = node_labels[n];
        w.arr.dims.reserve(nodes[n].legs().size());
        for (const LegType& leg : nodes[n].legs()) w.arr.dims.push_back(leg.dim);
        w.arr.data.assign(nodes[n].amplitudes().begin(), nodes[n].amplitudes().end());
        trace_repeated(w);
        pool.push_back(std::move(w));
    }
    if (pool.empty()) pool.push_back(Working{{}, {{}, {Complex(1.0)}}});

    auto holder_of = [&](int label) {
        std::vector<std::size_t> holders;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (std::find(pool[i].labels.begin(), pool[i].labels.end(), label) != pool[i].labels.end())
                holders.push_back(i);
        return holders;
    };
    auto merge = [&](std::size_t i, std::size_t j) {
        Working merged = contract_pair(pool[i], pool[j]);
        trace_repeated(merged);
        pool.erase(pool.begin() + static_cast<long>(std::max(i, j)));
        pool.erase(pool.begin() + static_cast<long>(std::min(i, j)));
        pool.push_back(std::move(merged));
    };

    if (edge_order != nullptr) {
        for (std::size_t e : *edge_order) {
            if (e >= edges.size()) throw NetworkError("edge order references a nonexistent edge");
            const auto holders = holder_of(static_cast<int>(e));
            if (holders.size() == 2) merge(holders[0], holders[1]);
            // A single holder means the edge already became internal; trace_repeated
            // resolved it when the holder was formed.
        }
    }
    while (pool.size() > 1) {
        // Greedy: among pairs sharing a label, the smallest contraction result wins.
        std::size_t best_i = 0, best_j = 1;
        std::size_t best_cost = std::numeric_limits<std::size_t>::max();
        bool found = false;
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = i + 1; j < pool.size(); ++j) {
                std::size_t shared_size = 1;
                bool shares = false;
                for (std::size_t ai = 0; ai < pool[i].labels.size(); ++ai)
                    if (std::find(pool[j].labels.begin(), pool[j].labels.end(),
                                  pool[i].labels[ai]) != pool[j].labels.end()) {
                        shares = true;
                        shared_size *= static_cast<std::size_t>(pool[i].arr.dims[ai]);
                    }
                if (!shares) continue;
                const std::size_t cost =
                    (pool[i].arr.data.size() / shared_size) * (pool[j].arr.data.size() / shared_size);
                if (cost < best_cost) {
                    best_cost = cost;
                    best_i = i;
                    best_j = j;
                    found = true;
                }
            }
        if (!found) {
            // Disconnected components: take the two smallest as an outer product.
            std::vector<std::size_t> order(pool.size());
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                return pool[x].arr.data.size() < pool[y].arr.data.size();
            });
            best_i = std::min(order[0], order[1]);
            best_j = std::max(order[0], order[1]);
        }
        merge(best_i, best_j);
    }

    Working result = std::move(pool.front());
    if (result.labels.size() != boundary.size())
        throw NetworkError("internal error: leftover labels after contraction");

    std::vector<int> perm(boundary.size());
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        const int want = first_boundary_label + static_cast<int>(i);
        const auto it = std::find(result.labels.begin(), result.labels.end(), want);
        if (it == result.labels.end())
            throw NetworkError("internal error: boundary label lost during contraction");
        perm[i] = static_cast<int>(it - result.labels.begin());
    }
    NdArray arranged = permute_axes(result.arr, perm);

    std::vector<LegType> legs;
    legs.reserve(boundary.size());
    for (const TensorLegRef& ref : boundary) legs.push_back(nodes[ref.node].legs()[ref.leg]);
    return ComplexTensor(std::move(legs), std::move(arranged.data));
}

}  // namespace qcat
