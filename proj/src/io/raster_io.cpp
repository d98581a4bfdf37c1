#include "opdet/io/raster_io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace opdet::io {

namespace {

void skip_pnm_space(std::istream& in) {
    int c = in.peek();
    while (c == '#' || std::isspace(c)) {
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else {
            in.get();
        }
        c = in.peek();
    }
}

long read_pnm_int(std::istream& in, const std::string& path) {
    skip_pnm_space(in);
    long v = 0;
    if (!(in >> v)) throw std::runtime_error("malformed PNM header: " + path);
    return v;
}

bool host_is_little_endian() {
    return std::endian::native == std::endian::little;
}

void byteswap_floats(std::vector<float>& v) {
    for (float& f : v) {
        std::uint32_t u;
        std::memcpy(&u, &f, 4);
        u = ((u & 0x000000ffu) << 24) | ((u & 0x0000ff00u) << 8) |
            ((u & 0x00ff0000u) >> 8) | ((u & 0xff000000u) >> 24);
        std::memcpy(&f, &u, 4);
    }
}

}  // namespace

void write_pgm(const Raster8& raster, const std::string& path) {
    raster.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "P5\n" << raster.width << " " << raster.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(raster.values.data()),
              static_cast<std::streamsize>(raster.values.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

Raster8 read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || m1 != '5') throw std::runtime_error("not a binary PGM: " + path);
    Raster8 r;
    r.width = static_cast<int>(read_pnm_int(in, path));
    r.height = static_cast<int>(read_pnm_int(in, path));
    const long maxval = read_pnm_int(in, path);
    if (maxval != 255) throw std::runtime_error("unsupported PGM maxval: " + path);
    in.get();  // single whitespace after maxval
    if (r.width < 1 || r.height < 1) throw std::runtime_error("bad PGM dimensions: " + path);
    r.values.resize(static_cast<std::size_t>(r.width) * r.height);
    in.read(reinterpret_cast<char*>(r.values.data()),
            static_cast<std::streamsize>(r.values.size()));
    if (in.gcount() != static_cast<std::streamsize>(r.values.size()))
        throw std::runtime_error("truncated PGM: " + path);
    return r;
}

void write_pfm(const RasterF& raster, const std::string& path) {
    raster.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    const double scale = host_is_little_endian() ? -1.0 : 1.0;
    out << "Pf\n" << raster.width << " " << raster.height << "\n" << scale << "\n";
    // PFM stores rows bottom-to-top.
    for (int y = raster.height - 1; y >= 0; --y) {
        out.write(reinterpret_cast<const char*>(&raster.values[static_cast<std::size_t>(y) * raster.width]),
                  static_cast<std::streamsize>(raster.width * sizeof(float)));
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

RasterF read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || m1 != 'f') throw std::runtime_error("not a grayscale PFM: " + path);
    RasterF r;
    r.width = static_cast<int>(read_pnm_int(in, path));
    r.height = static_cast<int>(read_pnm_int(in, path));
    skip_pnm_space(in);
    double scale = 0.0;
    if (!(in >> scale) || scale == 0.0) throw std::runtime_error("malformed PFM scale: " + path);
    in.get();
    if (r.width < 1 || r.height < 1) throw std::runtime_error("bad PFM dimensions: " + path);
    r.values.resize(static_cast<std::size_t>(r.width) * r.height);
    std::vector<float> row(static_cast<std::size_t>(r.width));
    for (int y = r.height - 1; y >= 0; --y) {
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
        if (in.gcount() != static_cast<std::streamsize>(row.size() * sizeof(float)))
            throw std::runtime_error("truncated PFM: " + path);
        std::memcpy(&r.values[static_cast<std::size_t>(y) * r.width], row.data(),
                    row.size() * sizeof(float));
    }
    const bool file_little = scale < 0.0;
    if (file_little != host_is_little_endian()) byteswap_floats(r.values);
    for (float v : r.values) {
        if (std::isnan(v)) {
            r.nodata = std::numeric_limits<float>::quiet_NaN();
            break;
        }
    }
    return r;
}

}  // namespace opdet::io
