#pragma once

#include <Eigen/Dense>
#include <vector>

namespace wosnet::relu {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Layer {
    Matrix A;
    Vector b;
};

// Explicit layered affine+ReLU network. The realization is
//   phi^1(x) = A^1 x + b^1,   phi^i(x) = A^i sigma(phi^{i-1}(x)) + b^i,
// with componentwise sigma = max{0, .} and no activation after the last
// affine map. size() is the number of nonzero weights; weights are stored
// dense, sparsity is only an accounting concept. Immutable after
// construction; eval is pure and safe to share across threads.
class ReluNet {
public:
    explicit ReluNet(std::vector<Layer> layers);

    int input_dim() const { return static_cast<int>(layers_.front().A.cols()); }
    int output_dim() const { return static_cast<int>(layers_.back().A.rows()); }
    int depth() const { return static_cast<int>(layers_.size()); }
    int width() const { return width_; }
    long size() const { return size_; }
    long recount_nonzeros() const;

    Vector eval(const Vector& x) const;
    double eval1(const Vector& x) const { return eval(x)(0); }

    // columns of X are input points; returns outputs column-wise
    Matrix eval_batch(const Matrix& X) const;

    const std::vector<Layer>& layers() const { return layers_; }

private:
    std::vector<Layer> layers_;
    long size_ = 0;
    int width_ = 0;
};

// depth-1 affine nets
ReluNet affine_net(const Matrix& A, const Vector& b);
ReluNet affine_net(const Matrix& A);
ReluNet identity_net(int dim);

// Extends a net to depth L without changing its realization: the final affine
// map is split through y = sigma(y) - sigma(-y) and carried by nonnegative
// rails. Cost per extra level matches the 2(L - L_i) accounting of the
// addition lemma.
ReluNet pad_to_depth(const ReluNet& net, int target_depth);

// Realization outer(inner(x)), size <= 2 size(outer) + 2 size(inner).
ReluNet compose(const ReluNet& outer, const ReluNet& inner);

// Realization sum_i coeffs[i] * nets[i](x) for scalar-output nets with a
// common input dimension.
ReluNet linear_combination(const std::vector<double>& coeffs, const std::vector<ReluNet>& nets);

// Block-diagonal stacking; output is the concatenation of component outputs.
// With shared_input all nets must have equal input dimension.
ReluNet parallelize(const std::vector<ReluNet>& nets, bool shared_input);

}  // namespace wosnet::relu
