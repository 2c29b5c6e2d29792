#pragma once

namespace affgrass {

/// Selects the OpenMP kernel or its serial reference. Both produce identical
/// results; the serial path exists for testing and benchmarking.
enum class Exec { serial, parallel };

}  // namespace affgrass
