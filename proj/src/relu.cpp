#include "wosnet/relu.hpp"

#include <stdexcept>

namespace wosnet::relu {

namespace {

long count_nonzeros(const std::vector<Layer>& layers) {
    long n = 0;
    for (const auto& l : layers) {
        n += (l.A.array() != 0.0).count();
        n += (l.b.array() != 0.0).count();
    }
    return n;
}

Layer split_pm(const Layer& l) {
    const auto k = l.A.rows();
    Layer out;
    out.A.resize(2 * k, l.A.cols());
    out.A << l.A, -l.A;
    out.b.resize(2 * k);
    out.b << l.b, -l.b;
    return out;
}

Matrix merge_pm(Eigen::Index k) {
    Matrix m(k, 2 * k);
    m << Matrix::Identity(k, k), -Matrix::Identity(k, k);
    return m;
}

Matrix block_diag(const std::vector<Matrix>& blocks) {
    Eigen::Index rows = 0, cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    Matrix out = Matrix::Zero(rows, cols);
    Eigen::Index r = 0, c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

Vector vcat(const std::vector<Vector>& parts) {
    Eigen::Index n = 0;
    for (const auto& p : parts) n += p.size();
    Vector out(n);
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        out.segment(at, p.size()) = p;
        at += p.size();
    }
    return out;
}

}  // namespace

ReluNet::ReluNet(std::vector<Layer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw std::invalid_argument("ReluNet: empty layer list");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (layers_[i].A.rows() != layers_[i].b.size())
            throw std::invalid_argument("ReluNet: bias length mismatch");
        if (i > 0 && layers_[i].A.cols() != layers_[i - 1].A.rows())
            throw std::invalid_argument("ReluNet: layer dimensions do not chain");
    }
    size_ = count_nonzeros(layers_);
    width_ = static_cast<int>(layers_.front().A.cols());
    for (const auto& l : layers_) width_ = std::max(width_, static_cast<int>(l.A.rows()));
}

long ReluNet::recount_nonzeros() const { return count_nonzeros(layers_); }

Vector ReluNet::eval(const Vector& x) const {
    if (x.size() != input_dim()) throw std::invalid_argument("eval: input dimension mismatch");
    Vector h = layers_.front().A * x + layers_.front().b;
    for (std::size_t i = 1; i < layers_.size(); ++i)
        h = layers_[i].A * h.cwiseMax(0.0) + layers_[i].b;
    return h;
}

Matrix ReluNet::eval_batch(const Matrix& X) const {
    if (X.rows() != input_dim()) throw std::invalid_argument("eval_batch: input dimension mismatch");
    Matrix h = (layers_.front().A * X).colwise() + layers_.front().b;
    for (std::size_t i = 1; i < layers_.size(); ++i)
        h = (layers_[i].A * h.cwiseMax(0.0)).colwise() + layers_[i].b;
    return h;
}

ReluNet affine_net(const Matrix& A, const Vector& b) { return ReluNet({Layer{A, b}}); }
ReluNet affine_net(const Matrix& A) { return affine_net(A, Vector::Zero(A.rows())); }
ReluNet identity_net(int dim) { return affine_net(Matrix::Identity(dim, dim)); }

ReluNet pad_to_depth(const ReluNet& net, int target_depth) {
    if (target_depth < net.depth()) throw std::invalid_argument("pad_to_depth: target too shallow");
    if (target_depth == net.depth()) return net;
    const auto k = static_cast<Eigen::Index>(net.output_dim());
    std::vector<Layer> layers(net.layers().begin(), net.layers().end() - 1);
    layers.push_back(split_pm(net.layers().back()));
    // rails are nonnegative, identity passes through sigma unchanged
    for (int i = 0; i < target_depth - net.depth() - 1; ++i)
        layers.push_back(Layer{Matrix::Identity(2 * k, 2 * k), Vector::Zero(2 * k)});
    layers.push_back(Layer{merge_pm(k), Vector::Zero(k)});
    return ReluNet(std::move(layers));
}

ReluNet compose(const ReluNet& outer, const ReluNet& inner) {
    if (outer.input_dim() != inner.output_dim())
        throw std::invalid_argument("compose: dimension mismatch");
    std::vector<Layer> layers;
    if (inner.depth() == 1) {
        const Layer& in = inner.layers().front();
        const Layer& o0 = outer.layers().front();
        layers.push_back(Layer{o0.A * in.A, o0.A * in.b + o0.b});
        layers.insert(layers.end(), outer.layers().begin() + 1, outer.layers().end());
    } else if (outer.depth() == 1) {
        const Layer& o = outer.layers().front();
        layers.assign(inner.layers().begin(), inner.layers().end() - 1);
        const Layer& last = inner.layers().back();
        layers.push_back(Layer{o.A * last.A, o.A * last.b + o.b});
    } else {
        layers.assign(inner.layers().begin(), inner.layers().end() - 1);
        layers.push_back(split_pm(inner.layers().back()));
        const Layer& o0 = outer.layers().front();
        Matrix A(o0.A.rows(), 2 * o0.A.cols());
        A << o0.A, -o0.A;
        layers.push_back(Layer{A, o0.b});
        layers.insert(layers.end(), outer.layers().begin() + 1, outer.layers().end());
    }
    return ReluNet(std::move(layers));
}

ReluNet linear_combination(const std::vector<double>& coeffs, const std::vector<ReluNet>& nets) {
    if (nets.empty() || coeffs.size() != nets.size())
        throw std::invalid_argument("linear_combination: empty or mismatched lists");
    const int in_dim = nets.front().input_dim();
    int depth = 1;
    for (const auto& n : nets) {
        if (n.input_dim() != in_dim)
            throw std::invalid_argument("linear_combination: input dims differ");
        if (n.output_dim() != 1)
            throw std::invalid_argument("linear_combination: scalar-output nets required");
        depth = std::max(depth, n.depth());
    }
    std::vector<ReluNet> padded;
    padded.reserve(nets.size());
    for (const auto& n : nets) padded.push_back(pad_to_depth(n, depth));

    if (depth == 1) {
        Matrix A = Matrix::Zero(1, in_dim);
        Vector b = Vector::Zero(1);
        for (std::size_t i = 0; i < padded.size(); ++i) {
            A += coeffs[i] * padded[i].layers().front().A;
            b += coeffs[i] * padded[i].layers().front().b;
        }
        return affine_net(A, b);
    }

    std::vector<Layer> layers;
    {
        std::vector<Matrix> as;
        std::vector<Vector> bs;
        for (const auto& n : padded) {
            as.push_back(n.layers().front().A);
            bs.push_back(n.layers().front().b);
        }
        Eigen::Index rows = 0;
        for (const auto& a : as) rows += a.rows();
        Matrix A(rows, in_dim);
        Eigen::Index r = 0;
        for (const auto& a : as) {
            A.middleRows(r, a.rows()) = a;
            r += a.rows();
        }
        layers.push_back(Layer{A, vcat(bs)});
    }
    for (int j = 1; j + 1 < depth; ++j) {
        std::vector<Matrix> as;
        std::vector<Vector> bs;
        for (const auto& n : padded) {
            as.push_back(n.layers()[j].A);
            bs.push_back(n.layers()[j].b);
        }
        layers.push_back(Layer{block_diag(as), vcat(bs)});
    }
    {
        Eigen::Index cols = 0;
        for (const auto& n : padded) cols += n.layers().back().A.cols();
        Matrix A(1, cols);
        double b = 0.0;
        Eigen::Index c = 0;
        for (std::size_t i = 0; i < padded.size(); ++i) {
            const Layer& last = padded[i].layers().back();
            A.block(0, c, 1, last.A.cols()) = coeffs[i] * last.A;
            b += coeffs[i] * last.b(0);
            c += last.A.cols();
        }
        layers.push_back(Layer{A, Vector::Constant(1, b)});
    }
    return ReluNet(std::move(layers));
}

ReluNet parallelize(const std::vector<ReluNet>& nets, bool shared_input) {
    if (nets.empty()) throw std::invalid_argument("parallelize: empty list");
    int depth = 1;
    for (const auto& n : nets) depth = std::max(depth, n.depth());
    std::vector<ReluNet> padded;
    padded.reserve(nets.size());
    for (const auto& n : nets) {
        if (shared_input && n.input_dim() != nets.front().input_dim())
            throw std::invalid_argument("parallelize: shared input dims differ");
        padded.push_back(pad_to_depth(n, depth));
    }
    std::vector<Layer> layers;
    for (int j = 0; j < depth; ++j) {
        std::vector<Matrix> as;
        std::vector<Vector> bs;
        for (const auto& n : padded) {
            as.push_back(n.layers()[j].A);
            bs.push_back(n.layers()[j].b);
        }
        if (j == 0 && shared_input) {
            Eigen::Index rows = 0;
            for (const auto& a : as) rows += a.rows();
            Matrix A(rows, nets.front().input_dim());
            Eigen::Index r = 0;
            for (const auto& a : as) {
                A.middleRows(r, a.rows()) = a;
                r += a.rows();
            }
            layers.push_back(Layer{A, vcat(bs)});
        } else {
            layers.push_back(Layer{block_diag(as), vcat(bs)});
        }
    }
    return ReluNet(std::move(layers));
}

}  // namespace wosnet::relu
