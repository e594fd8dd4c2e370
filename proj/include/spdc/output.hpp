#pragma once

#include <iosfwd>

#include <Eigen/Core>

#include "spdc/spectrum.hpp"
#include "spdc/text.hpp"

namespace spdc {

/// `# key=value` metadata lines, then `q_per_um,lambda_nm,density` rows,
/// wavelength-outer, 9 significant digits.
void write_curve_csv(std::ostream& out, const TuningCurve& curve, const text::KeyValues& metadata);

/// Binary PGM (P5, maxval 65535, big-endian): width = q samples, height =
/// wavelength samples, first row = longest wavelength, pixel = round(65535 v).
void write_curve_pgm(std::ostream& out, const TuningCurve& curve);

/// `# key=value` metadata, then `lambda_nm,density`.
void write_marginal_csv(std::ostream& out, const TuningCurve& curve, const Eigen::VectorXd& marginal,
                        const text::KeyValues& metadata);

/// Plain `key=value` lines.
void write_metadata(std::ostream& out, const text::KeyValues& metadata);

} // namespace spdc
