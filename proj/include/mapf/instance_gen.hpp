#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mapf/model.hpp"

namespace mapf {

enum class Family { grid, maze, room, random };

const char* to_string(Family f);
Family parse_family(std::string_view text);

struct GenSpec {
    Family family = Family::grid;
    int size = 10;          // grid side
    int agents = 5;
    int room_size = 3;      // cells per room side
    double density = 0.5;   // cell probability for the random family
    std::uint64_t seed = 1;
    std::optional<int> max_duration;  // weighted: durations uniform in [1, max_duration]
};

// Throws std::invalid_argument for out-of-range parameters or when fewer
// than `agents` vertices survive.
Instance gen(const GenSpec& spec);

}  // namespace mapf
