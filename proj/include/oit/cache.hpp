#pragma once

// Per-curve a_p cache on disk: one text file "a=<a>,b=<b>.txt" of lines
// "p,a_p" with ascending p. Writers take an advisory lock and replace the
// file by rename; a file that fails validation is moved aside, never rebuilt.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "oit/arith.hpp"
#include "oit/characters.hpp"
#include "oit/curve/curve.hpp"
#include "oit/error.hpp"

namespace oit {

class ApCache {
public:
    using Records = std::map<std::uint64_t, std::int64_t>;

    /// Loads the curve's file if present; CacheCorrupt (after quarantine) if it is invalid.
    ApCache(std::filesystem::path dir, const PreparedCurve& e) : dir_(std::move(dir)), e_(e) {
        path_ = dir_ / (e_.curve().key() + ".txt");
        records_ = read_validated();
    }

    const std::filesystem::path& path() const { return path_; }
    const Records& records() const { return records_; }

    /// Number of a_p values computed rather than read back.
    std::uint64_t computed() const { return computed_; }

    /// Cached value, or compute and persist it at once.
    std::int64_t lookup_or_compute(std::uint64_t p) {
        std::int64_t a = get(p);
        flush();
        return a;
    }

    /// Cached value, or compute and hold it until flush().
    std::int64_t get(std::uint64_t p) {
        if (auto it = records_.find(p); it != records_.end()) return it->second;
        std::int64_t a = e_.ap(p);
        ++computed_;
        records_[p] = a;
        pending_[p] = a;
        return a;
    }

    ApSource source() {
        return [this](std::uint64_t p) { return get(p); };
    }

    /// Merge pending values into the file under the lock, replacing it atomically.
    void flush() {
        if (pending_.empty()) return;
        std::filesystem::create_directories(dir_);
        const std::string lock_path = path_.string() + ".lock";
        const int fd = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd < 0) fail(Errc::InvalidArgument, "cannot open cache lock " + lock_path);
        ::flock(fd, LOCK_EX);
        try {
            Records merged = read_validated();
            for (const auto& [p, a] : pending_) merged[p] = a;
            const std::filesystem::path tmp = path_.string() + ".tmp." + std::to_string(::getpid());
            {
                std::ofstream out(tmp, std::ios::trunc);
                for (const auto& [p, a] : merged) out << p << ',' << a << '\n';
                out.flush();
                if (!out) fail(Errc::InvalidArgument, "cannot write cache file " + tmp.string());
            }
            std::filesystem::rename(tmp, path_);
            records_ = std::move(merged);
            pending_.clear();
        } catch (...) {
            ::flock(fd, LOCK_UN);
            ::close(fd);
            throw;
        }
        ::flock(fd, LOCK_UN);
        ::close(fd);
    }

    /// Parse cache text; returns an error description or empty on success.
    static std::string parse(const std::string& text, Records& out) {
        std::istringstream in(text);
        std::string line;
        std::size_t lineno = 0;
        std::uint64_t last = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto where = "line " + std::to_string(lineno) + " \"" + line + "\"";
            const auto comma = line.find(',');
            if (comma == std::string::npos) return where + ": expected p,a_p";
            std::uint64_t p = 0;
            std::int64_t a = 0;
            const char* s = line.data();
            auto r1 = std::from_chars(s, s + comma, p);
            auto r2 = std::from_chars(s + comma + 1, s + line.size(), a);
            if (r1.ec != std::errc() || r1.ptr != s + comma || r2.ec != std::errc() || r2.ptr != s + line.size())
                return where + ": not two integers";
            if (!arith::is_prime(p)) return where + ": " + std::to_string(p) + " is not prime";
            if (p <= last) return where + ": primes are not strictly ascending";
            if (static_cast<__int128>(a) * a > static_cast<__int128>(4) * p) return where + ": violates |a_p| <= 2 sqrt(p)";
            out[p] = a;
            last = p;
        }
        return {};
    }

private:
    Records read_validated() {
        Records out;
        if (!std::filesystem::exists(path_)) return out;
        std::ifstream in(path_);
        std::stringstream buf;
        buf << in.rdbuf();
        if (auto why = parse(buf.str(), out); !why.empty()) {
            const std::filesystem::path q = path_.string() + ".corrupt";
            std::error_code ec;
            std::filesystem::rename(path_, q, ec);
            fail(Errc::CacheCorrupt, path_.string() + " " + why + (ec ? "" : "; moved to " + q.string()));
        }
        return out;
    }

    std::filesystem::path dir_;
    const PreparedCurve& e_;
    std::filesystem::path path_;
    Records records_;
    Records pending_;
    std::uint64_t computed_ = 0;
};

}  // namespace oit
