#pragma once

namespace triwave {

/// Entry point behind the `triwave` executable. Returns 0 on success, 1 on
/// validation errors, 2 on numerical failures.
int dispatch(int argc, char** argv);

}  // namespace triwave
