#pragma once

#include <stdexcept>
#include <string>

namespace pvlab {

// All failure modes surface as typed exceptions so callers (and the CLI)
// can report which admissibility or solver guard tripped.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct BadGrid : Error { using Error::Error; };
struct FrontTooLarge : Error { using Error::Error; };
struct HyperbolicityLost : Error { using Error::Error; };
struct MetricDegenerate : Error { using Error::Error; };
struct CflViolation : Error { using Error::Error; };
struct SolverDiverged : Error { using Error::Error; };
struct IncompatibleData : Error { using Error::Error; };
struct StabilityMarginLost : Error { using Error::Error; };
struct BoundaryTransportLeak : Error { using Error::Error; };
struct OrderTooHighForGrid : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace pvlab
