#include "rnm/report.hpp"

namespace rnm {

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Full: return "full";
        case Outcome::Partial: return "partial";
        case Outcome::Failure: return "failure";
    }
    return "unknown";
}

}  // namespace rnm
