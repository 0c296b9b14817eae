#pragma once
#include <cstdlib>
#include <iostream>
#include <sstream>

namespace onesided {

// Verbosity from ONESIDED_LOG: 0 = errors only (default), 1 = info, 2 = debug.
inline int log_level() {
    static const int level = [] {
        const char* env = std::getenv("ONESIDED_LOG");
        if (!env) return 0;
        return std::atoi(env);
    }();
    return level;
}

template <typename... Args>
void log_info(Args&&... args) {
    if (log_level() >= 1) {
        std::ostringstream os;
        (os << ... << args);
        std::cerr << "[onesided] " << os.str() << "\n";
    }
}

template <typename... Args>
void log_debug(Args&&... args) {
    if (log_level() >= 2) {
        std::ostringstream os;
        (os << ... << args);
        std::cerr << "[onesided:debug] " << os.str() << "\n";
    }
}

template <typename... Args>
void log_error(Args&&... args) {
    std::ostringstream os;
    (os << ... << args);
    std::cerr << "[onesided:error] " << os.str() << "\n";
}

}  // namespace onesided
