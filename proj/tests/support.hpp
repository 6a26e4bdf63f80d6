#pragma once

#include <filesystem>
#include <map>
#include <fstream>
#include <random>
#include <unistd.h>
#include <string>
#include <vector>

#include "bqr/corpus.hpp"

namespace bqr::testing {

inline Document doc(std::string id, std::string text,
                    std::map<std::string, std::vector<std::string>> attrs = {}) {
    Document d;
    d.doc_id = std::move(id);
    d.text = std::move(text);
    d.attributes = std::move(attrs);
    return d;
}

// Scratch file removed on scope exit.
class TempFile {
public:
    explicit TempFile(const std::string& content, const std::string& suffix = ".txt") {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("bqr_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + suffix);
        std::ofstream(path_, std::ios::binary) << content;
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::filesystem::path data_dir() { return BQR_DATA_DIR; }

}  // namespace bqr::testing
