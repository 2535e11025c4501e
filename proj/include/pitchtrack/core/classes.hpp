#ifndef PITCHTRACK_CORE_CLASSES_HPP
#define PITCHTRACK_CORE_CLASSES_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "error.hpp"

namespace pitchtrack {

enum class ClassLabel : int { ball = 0, goalkeeper = 1, player = 2, referee = 3 };

inline constexpr std::size_t kNumClasses = 4;

inline constexpr std::array<ClassLabel, kNumClasses> kAllClasses{
    ClassLabel::ball, ClassLabel::goalkeeper, ClassLabel::player, ClassLabel::referee};

inline constexpr std::size_t class_index(ClassLabel c) { return static_cast<std::size_t>(c); }

inline constexpr std::string_view class_name(ClassLabel c) {
    switch (c) {
    case ClassLabel::ball: return "ball";
    case ClassLabel::goalkeeper: return "goalkeeper";
    case ClassLabel::player: return "player";
    case ClassLabel::referee: return "referee";
    }
    return "unknown";
}

/// Capitalised name used in the report table.
inline std::string class_title(ClassLabel c) {
    std::string s(class_name(c));
    s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

inline std::optional<ClassLabel> class_from_name(std::string_view name) {
    for (auto c : kAllClasses) {
        if (class_name(c) == name) {
            return c;
        }
    }
    return std::nullopt;
}

/**
 * Bijection between the four labels and the integer ids used on disk.
 *
 * The default is alphabetical (ball=0, goalkeeper=1, player=2, referee=3).
 */
class ClassMap {
public:
    ClassMap() : ids_{0, 1, 2, 3} {}

    explicit ClassMap(std::array<int, kNumClasses> ids) : ids_(ids) {
        for (std::size_t i = 0; i < kNumClasses; ++i) {
            if (ids_[i] < 0) {
                throw ConfigError("class id must be non-negative");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (ids_[i] == ids_[j]) {
                    throw ConfigError("class id mapping is not a bijection: id " + std::to_string(ids_[i]) +
                                      " used twice");
                }
            }
        }
    }

    int id_of(ClassLabel c) const { return ids_[class_index(c)]; }

    std::optional<ClassLabel> label_of(int id) const {
        for (std::size_t i = 0; i < kNumClasses; ++i) {
            if (ids_[i] == id) {
                return kAllClasses[i];
            }
        }
        return std::nullopt;
    }

    friend bool operator==(const ClassMap&, const ClassMap&) = default;

private:
    std::array<int, kNumClasses> ids_;
};

} // namespace pitchtrack

#endif
