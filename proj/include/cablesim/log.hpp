#pragma once

namespace cablesim {

// Routes the default logger to stderr at the level named by
// CABLESIM_LOG_LEVEL (trace, debug, info, warn, error, off). Default: warn.
void init_logging();

}  // namespace cablesim
