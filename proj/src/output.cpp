#include "spdc/output.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace spdc {

namespace {

void write_comment_block(std::ostream& out, const text::KeyValues& metadata, const TuningCurve& curve) {
    for (const auto& [k, v] : metadata) out << "# " << k << '=' << v << '\n';
    out << "# params_digest=" << curve.params_digest << '\n';
    out << "# raw_max=" << text::exact(curve.raw_max) << '\n';
    out << "# unconverged_pixels=" << curve.unconverged_pixels << '\n';
}

} // namespace

void write_curve_csv(std::ostream& out, const TuningCurve& curve, const text::KeyValues& metadata) {
    write_comment_block(out, metadata, curve);
    out << "q_per_um,lambda_nm,density\n";
    std::string line;
    for (Eigen::Index i = 0; i < curve.rows(); ++i) {
        const std::string lambda = text::sig(curve.lambda_axis[i] * 1e9, 9);
        for (Eigen::Index j = 0; j < curve.cols(); ++j) {
            line = text::sig(curve.q_axis[j] * 1e-6, 9);
            line += ',';
            line += lambda;
            line += ',';
            line += text::sig(curve.values(i, j), 9);
            line += '\n';
            out << line;
        }
    }
}

void write_curve_pgm(std::ostream& out, const TuningCurve& curve) {
    out << "P5\n" << curve.cols() << ' ' << curve.rows() << "\n65535\n";
    for (Eigen::Index i = curve.rows() - 1; i >= 0; --i) {
        for (Eigen::Index j = 0; j < curve.cols(); ++j) {
            const double v = std::clamp(curve.values(i, j), 0.0, 1.0);
            const auto px = static_cast<unsigned>(std::lround(v * 65535.0));
            out.put(static_cast<char>((px >> 8) & 0xff));
            out.put(static_cast<char>(px & 0xff));
        }
    }
}

void write_marginal_csv(std::ostream& out, const TuningCurve& curve, const Eigen::VectorXd& marginal,
                        const text::KeyValues& metadata) {
    write_comment_block(out, metadata, curve);
    out << "lambda_nm,density\n";
    for (Eigen::Index i = 0; i < marginal.size(); ++i)
        out << text::sig(curve.lambda_axis[i] * 1e9, 9) << ',' << text::sig(marginal[i], 9) << '\n';
}

void write_metadata(std::ostream& out, const text::KeyValues& metadata) {
    for (const auto& [k, v] : metadata) out << k << '=' << v << '\n';
}

} // namespace spdc
