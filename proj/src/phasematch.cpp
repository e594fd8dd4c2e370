#include "spdc/phasematch.hpp"

namespace spdc {

void PumpSpec::validate() const {
    if (!(omega_p > 0)) throw ValidationError("pump.wavelength", "pump frequency must be > 0");
    if (!(waist_w0 > 0)) throw ValidationError("pump.waist", "must be > 0");
    if (power && !(*power >= 0)) throw ValidationError("pump.power", "must be >= 0");
}

} // namespace spdc
