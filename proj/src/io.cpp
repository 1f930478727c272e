#include "qtraj/io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace qtraj {

namespace {

constexpr char kMagic[8] = {'Q', 'T', 'R', 'A', 'J', 'F', 'L', 'D'};

template <typename T>
void write_pod(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ofstream os(path, mode);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os.precision(17);
    return os;
}

} // namespace

void dump_field(const WaveField& f, const std::filesystem::path& path) {
    auto os = open_out(path, std::ios::binary);
    os.write(kMagic, sizeof(kMagic));
    write_pod<std::int64_t>(os, f.grid.dim);
    write_pod<std::int64_t>(os, f.grid.n[0]);
    write_pod<std::int64_t>(os, f.grid.n[1]);
    write_pod<std::int64_t>(os, f.grid.boundary == Boundary::Periodic ? 0 : 1);
    write_pod<double>(os, f.grid.qmin[0]);
    write_pod<double>(os, f.grid.qmax[0]);
    write_pod<double>(os, f.grid.qmin[1]);
    write_pod<double>(os, f.grid.qmax[1]);
    write_pod<double>(os, f.hbar);
    write_pod<double>(os, f.mass);
    write_pod<double>(os, f.time);
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
}

WaveField load_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path.string());
    char magic[8];
    is.read(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(magic)) != 0)
        throw std::runtime_error("not a field dump: " + path.string());
    WaveField f;
    f.grid.dim = static_cast<int>(read_pod<std::int64_t>(is));
    f.grid.n[0] = static_cast<int>(read_pod<std::int64_t>(is));
    f.grid.n[1] = static_cast<int>(read_pod<std::int64_t>(is));
    f.grid.boundary = read_pod<std::int64_t>(is) == 0 ? Boundary::Periodic : Boundary::Dirichlet;
    f.grid.qmin[0] = read_pod<double>(is);
    f.grid.qmax[0] = read_pod<double>(is);
    f.grid.qmin[1] = read_pod<double>(is);
    f.grid.qmax[1] = read_pod<double>(is);
    f.hbar = read_pod<double>(is);
    f.mass = read_pod<double>(is);
    f.time = read_pod<double>(is);
    f.values.resize(f.grid.size());
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
    if (!is) throw std::runtime_error("truncated field dump: " + path.string());
    return f;
}

void export_field_text(const WaveField& f, const std::filesystem::path& path) {
    auto os = open_out(path, std::ios::out);
    const Grid& g = f.grid;
    os << (g.dim == 1 ? "# q re im\n" : "# q1 q2 re im\n");
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j) {
            os << g.point(0, i);
            if (g.dim == 2) os << ' ' << g.point(1, j);
            const cplx v = f.values[g.index(i, j)];
            os << ' ' << v.real() << ' ' << v.imag() << '\n';
        }
}

void export_flow_text(const FlowSnapshot& s, const std::filesystem::path& path) {
    auto os = open_out(path, std::ios::out);
    const Grid& g = s.grid;
    os << (g.dim == 1 ? "# q rho v Q node\n" : "# q1 q2 rho v1 v2 Q node\n");
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j) {
            const std::size_t idx = g.index(i, j);
            os << g.point(0, i);
            if (g.dim == 2) os << ' ' << g.point(1, j);
            os << ' ' << s.rho[idx] << ' ' << s.velocity[idx][0];
            if (g.dim == 2) os << ' ' << s.velocity[idx][1];
            os << ' ' << s.qpot[idx] << ' ' << int(s.node_mask[idx]) << '\n';
        }
}

void export_trajectories_text(const TrajectoryEnsemble& e, const std::filesystem::path& path,
                              int stride) {
    auto os = open_out(path, std::ios::out);
    os << (e.dim == 1 ? "# t particle q\n" : "# t particle q1 q2\n");
    for (std::size_t t = 0; t < e.times.size(); t += stride)
        for (int p = 0; p < e.n_particles; ++p) {
            os << e.times[t] << ' ' << p << ' ' << e.at(t, p)[0];
            if (e.dim == 2) os << ' ' << e.at(t, p)[1];
            os << '\n';
        }
}

void export_coeffs_text(const SpectralCoeffs& c, const std::filesystem::path& path) {
    auto os = open_out(path, std::ios::out);
    os << "# L " << c.L << " hbar " << c.hbar << " mass " << c.mass << " n_max " << c.n_max
       << " t0 " << c.t0 << " residual " << c.residual << "\n# n m re im\n";
    for (int n = 1; n <= c.n_max; ++n)
        for (int m = 1; m <= c.n_max; ++m) {
            const cplx v = c.c[static_cast<std::size_t>(n - 1) * c.n_max + (m - 1)];
            os << n << ' ' << m << ' ' << v.real() << ' ' << v.imag() << '\n';
        }
}

std::uint64_t file_checksum(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path.string());
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[65536];
    while (is) {
        is.read(buf, sizeof(buf));
        const std::streamsize got = is.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ULL;
        }
    }
    return h;
}

} // namespace qtraj
