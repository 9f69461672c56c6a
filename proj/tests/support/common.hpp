#pragma once

#include <string>

#include "socprac/lang.hpp"
#include "socprac/practice.hpp"

namespace socprac::testdata {

inline std::string path(const std::string& rel) { return std::string(SOCPRAC_DATA_DIR) + "/" + rel; }

inline KripkeModel model(const std::string& rel) { return parse_model(read_file(path(rel)), path(rel)); }

inline SocialPractice practice(const std::string& rel, const KripkeModel& m) {
    return parse_practice(read_file(path(rel)), m, path(rel));
}

}  // namespace socprac::testdata
