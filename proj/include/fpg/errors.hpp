#pragma once

#include <stdexcept>

namespace fpg {

// Error taxonomy shared by the library and the CLI exit-code mapping:
// parse_error -> 2, semantic_error and subclasses -> 3, bound_error -> 4.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : error {
    using error::error;
};
struct semantic_error : error {
    using error::error;
};
struct bound_error : error {
    using error::error;
};

struct shape_error : semantic_error {
    using semantic_error::semantic_error;
};
struct minimality_error : semantic_error {
    using semantic_error::semantic_error;
};
struct degenerate_error : semantic_error {
    using semantic_error::semantic_error;
};
struct precondition_error : semantic_error {
    using semantic_error::semantic_error;
};
struct contradiction_error : semantic_error {
    using semantic_error::semantic_error;
};

}  // namespace fpg
