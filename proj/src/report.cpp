#include "tpic/report.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace tpic {

namespace {

constexpr std::uint32_t format_version = 1;

void put_u32(std::string& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        b.push_back(static_cast<char>(v & 0xff));
        v >>= 8;
    }
}

void put_u64(std::string& b, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        b.push_back(static_cast<char>(v & 0xff));
        v >>= 8;
    }
}

void put_f64(std::string& b, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64(b, v);
}

class Reader {
public:
    Reader(const std::string& data, const std::string& path) : d_(data), path_(path) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(d_[pos_ + i]);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(d_[pos_ + i]);
        pos_ += 8;
        return v;
    }
    double f64() {
        const std::uint64_t v = u64();
        double d;
        std::memcpy(&d, &v, 8);
        return d;
    }
    std::string bytes(std::size_t n) {
        need(n);
        std::string s = d_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::size_t remaining() const { return d_.size() - pos_; }

    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("malformed report file " + path_ + ": " + what);
    }

private:
    void need(std::size_t n) const {
        if (d_.size() - pos_ < n) fail("truncated");
    }
    const std::string& d_;
    std::string path_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string report_filename(const GridPayload& p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06lld", static_cast<long long>(p.step));
    return p.name + "-" + buf + ".tpic";
}

void write_report(const std::string& path, const GridPayload& p) {
    std::string b;
    b.reserve(64 + p.name.size() + p.data.size() * 8);
    b += "TPIC";
    put_u32(b, format_version);
    put_u32(b, static_cast<std::uint32_t>(p.name.size()));
    b += p.name;
    put_u64(b, static_cast<std::uint64_t>(p.step));
    put_u32(b, static_cast<std::uint32_t>(p.nx));
    put_u32(b, static_cast<std::uint32_t>(p.ny));
    put_f64(b, p.dx);
    put_f64(b, p.dy);
    put_f64(b, p.time);
    for (double v : p.data) put_f64(b, v);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open report file for writing: " + path);
    out.write(b.data(), static_cast<std::streamsize>(b.size()));
    out.flush();
    if (!out) throw std::runtime_error("cannot write report file: " + path);
}

GridPayload read_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open report file: " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw std::runtime_error("cannot read report file: " + path);

    Reader r(data, path);
    if (r.bytes(4) != "TPIC") r.fail("bad magic");
    const std::uint32_t version = r.u32();
    if (version != format_version) {
        r.fail("unsupported version " + std::to_string(version));
    }
    const std::uint32_t name_len = r.u32();
    if (name_len > (1u << 16)) r.fail("unreasonable name length");

    GridPayload p;
    p.name = r.bytes(name_len);
    p.step = static_cast<std::int64_t>(r.u64());
    const std::uint32_t nx = r.u32();
    const std::uint32_t ny = r.u32();
    if (nx == 0 || ny == 0 || nx > (1u << 20) || ny > (1u << 20)) r.fail("bad grid extents");
    p.nx = static_cast<int>(nx);
    p.ny = static_cast<int>(ny);
    p.dx = r.f64();
    p.dy = r.f64();
    p.time = r.f64();

    const std::uint64_t count = static_cast<std::uint64_t>(nx) * ny;
    if (r.remaining() != count * 8) r.fail("payload size mismatch");
    p.data.resize(count);
    for (std::uint64_t k = 0; k < count; ++k) p.data[k] = r.f64();
    return p;
}

void dump_csv(const GridPayload& p, std::ostream& os) {
    auto num = [](double v) {
        char buf[32];
        auto r = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, r.ptr);
    };
    os << "# name = " << p.name << "\n";
    os << "# step = " << p.step << "\n";
    os << "# nx = " << p.nx << "\n";
    os << "# ny = " << p.ny << "\n";
    os << "# dx = " << num(p.dx) << "\n";
    os << "# dy = " << num(p.dy) << "\n";
    os << "# time = " << num(p.time) << "\n";
    os << "i,j,value\n";
    for (int j = 0; j < p.ny; ++j) {
        for (int i = 0; i < p.nx; ++i) {
            os << i << ',' << j << ',' << num(p.data[static_cast<std::size_t>(j) * p.nx + i])
               << "\n";
        }
    }
}

}  // namespace tpic
