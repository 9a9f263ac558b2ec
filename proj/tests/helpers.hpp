#pragma once

#include <string>

#include "qpomdp/ingest.hpp"

namespace qtest {

inline std::string data_path(const std::string& name) {
    return std::string(QPOMDP_TEST_DATA) + "/" + name;
}

inline std::string slurp(const std::string& name) {
    return qpomdp::read_text_file(data_path(name));
}

inline qpomdp::Pomdp load_fixture(const std::string& name) {
    return qpomdp::load_model(slurp(name));
}

} // namespace qtest
