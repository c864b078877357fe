#pragma once

#include "bbe/maps.hpp"

namespace bbe {

/// Mean logistic loss on logits with its analytic gradient.
///
/// loss = (1 / HW) * sum[ softplus(z) - y * z ]
/// grad = (sigmoid(z) - y) / HW
///
/// The softplus form is evaluated as max(z, 0) + log1p(exp(-|z|)), which is
/// exact for saturated logits of either sign. Targets must be exactly 0 or 1.
template <typename Scalar>
struct SegLossResult {
    double loss = 0.0;
    Grid<Scalar> grad;
};

template <typename Scalar>
SegLossResult<Scalar> seg_loss(const Grid<Scalar>& logits, const Grid<Scalar>& target) {
    if (logits.rows() != target.rows() || logits.cols() != target.cols()) {
        throw ValidationError("seg_loss: shape mismatch");
    }
    if (!((target == Scalar(0)) || (target == Scalar(1))).all()) {
        throw ValidationError("seg_loss: target values must be exactly 0 or 1");
    }
    const double n = static_cast<double>(logits.size());
    Grid<Scalar> softplus = logits.max(Scalar(0)) + (-logits.abs()).exp().log1p();
    SegLossResult<Scalar> out;
    out.loss = (softplus - logits * target).template cast<double>().sum() / n;
    Grid<Scalar> sigmoid = Scalar(1) / (Scalar(1) + (-logits).exp());
    out.grad = (sigmoid - target) / Scalar(n);
    return out;
}

/// Masked mean-L1 loss over the four offset channels.
///
/// loss = (1 / max(1, |mask|)) * sum over masked pixels and channels of
/// |pred - target|, where |mask| counts masked pixels. The subgradient is
/// sign(pred - target) / |mask| on masked entries (sign(0) = 0) and zero
/// elsewhere; an empty mask yields zero loss.
template <typename Scalar>
struct OffsetLossResult {
    double loss = 0.0;
    typename OffsetField<Scalar>::Data grad;
};

template <typename Scalar>
OffsetLossResult<Scalar> offset_loss(const OffsetField<Scalar>& pred,
                                     const OffsetField<Scalar>& target,
                                     const BinaryMask& mask) {
    if (pred.height != target.height || pred.width != target.width ||
        pred.height != mask.rows() || pred.width != mask.cols()) {
        throw ValidationError("offset_loss: shape mismatch");
    }
    validate_binary_mask(mask);
    const double denom = std::max<double>(1.0, (mask > 0).count());

    OffsetLossResult<Scalar> out;
    out.grad = OffsetField<Scalar>::Data::Zero(pred.pixels(), 4);
    double total = 0.0;
    for (Eigen::Index r = 0; r < pred.height; ++r) {
        for (Eigen::Index c = 0; c < pred.width; ++c) {
            if (!mask(r, c)) continue;
            const Eigen::Index i = pred.flat(r, c);
            for (int k = 0; k < 4; ++k) {
                const Scalar d = pred.data(i, k) - target.data(i, k);
                total += std::abs(static_cast<double>(d));
                if (d > Scalar(0)) out.grad(i, k) = Scalar(1.0 / denom);
                else if (d < Scalar(0)) out.grad(i, k) = Scalar(-1.0 / denom);
            }
        }
    }
    out.loss = total / denom;
    return out;
}

/// Combined report for one training example. The relative weight scales the
/// offset term in `total`; the stored per-loss values and gradients are
/// unweighted.
template <typename Scalar>
struct LossReport {
    double seg = 0.0;
    double offset = 0.0;
    double offset_weight = 1.0;
    double total = 0.0;
    Grid<Scalar> seg_grad;
    typename OffsetField<Scalar>::Data offset_grad;
};

template <typename Scalar>
LossReport<Scalar> loss_report(const Grid<Scalar>& logits, const Grid<Scalar>& seg_target,
                               const OffsetField<Scalar>& pred_offsets,
                               const OffsetField<Scalar>& target_offsets,
                               const BinaryMask& offset_mask, double offset_weight = 1.0) {
    auto s = seg_loss(logits, seg_target);
    auto o = offset_loss(pred_offsets, target_offsets, offset_mask);
    LossReport<Scalar> report;
    report.seg = s.loss;
    report.offset = o.loss;
    report.offset_weight = offset_weight;
    report.total = s.loss + offset_weight * o.loss;
    report.seg_grad = std::move(s.grad);
    report.offset_grad = std::move(o.grad);
    return report;
}

}  // namespace bbe
