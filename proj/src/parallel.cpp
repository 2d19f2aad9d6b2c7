#include "deplens/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

namespace deplens {

int configure_threads_from_env() {
    if (const char* env = std::getenv("DEPLENS_THREADS")) {
        const std::string_view text(env);
        int n = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
        if (ec == std::errc{} && ptr == text.data() + text.size() && n > 0) set_threads(n);
    }
    return max_threads();
}

}  // namespace deplens
