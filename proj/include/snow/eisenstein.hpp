#ifndef SNOW_EISENSTEIN_HPP
#define SNOW_EISENSTEIN_HPP

#include <cstdint>
#include <complex>
#include <functional>

// Exact lattice arithmetic in Z[w], w = exp(i*pi/3).  w satisfies w^2 = w - 1,
// so (a + b*w) is closed under multiplication.  A geometric point is a lattice
// element divided by 3^scale; the scale is carried by the containing structure
// (graph level, mesh level), never by the point itself.

namespace snow {

struct EPoint {
    std::int64_t a = 0;  // coefficient of 1
    std::int64_t b = 0;  // coefficient of w

    friend EPoint operator+(EPoint p, EPoint q) { return {p.a + q.a, p.b + q.b}; }
    friend EPoint operator-(EPoint p, EPoint q) { return {p.a - q.a, p.b - q.b}; }
    friend EPoint operator-(EPoint p) { return {-p.a, -p.b}; }
    friend EPoint operator*(std::int64_t s, EPoint p) { return {s * p.a, s * p.b}; }
    friend bool operator==(EPoint p, EPoint q) { return p.a == q.a && p.b == q.b; }
    friend bool operator!=(EPoint p, EPoint q) { return !(p == q); }
};

// (a+bw)(c+dw) = ac - bd + (ad + bc + bd) w
inline EPoint emul(EPoint p, EPoint q) {
    return {p.a * q.a - p.b * q.b, p.a * q.b + p.b * q.a + p.b * q.b};
}

// conj(a+bw) = (a+b) - b w
inline EPoint econj(EPoint p) { return {p.a + p.b, -p.b}; }

// |a+bw|^2 = a^2 + ab + b^2 (exact integer)
inline std::int64_t enorm2(EPoint p) { return p.a * p.a + p.a * p.b + p.b * p.b; }

// w^k for k = 0..5
inline EPoint sixth_root(int k) {
    static constexpr std::int64_t tab[6][2] = {
        {1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
    k = ((k % 6) + 6) % 6;
    return {tab[k][0], tab[k][1]};
}

// cross(u, v) up to the positive factor sqrt(3)/2: sign gives orientation
inline std::int64_t ecross(EPoint u, EPoint v) { return u.a * v.b - u.b * v.a; }

// 2 * (u . v) as an exact integer
inline std::int64_t edot2(EPoint u, EPoint v) {
    return 2 * u.a * v.a + u.a * v.b + u.b * v.a + 2 * u.b * v.b;
}

inline std::complex<double> to_complex(EPoint p, int scale3) {
    double s = 1.0;
    for (int i = 0; i < scale3; ++i) s /= 3.0;
    return {s * (p.a + 0.5 * p.b), s * (0.8660254037844386467637231707529362 * p.b)};
}

// orientation of r relative to the directed line p->q: >0 left, 0 on, <0 right
inline int orient(EPoint p, EPoint q, EPoint r) {
    std::int64_t c = ecross(q - p, r - p);
    return (c > 0) - (c < 0);
}

struct EPointHash {
    std::size_t operator()(EPoint p) const {
        std::uint64_t x = (static_cast<std::uint64_t>(p.a + (1LL << 31)) << 32) |
                          static_cast<std::uint32_t>(p.b + (1LL << 31));
        x ^= x >> 33; x *= 0xff51afd7ed558ccdULL;
        x ^= x >> 33; x *= 0xc4ceb9fe1a85ec53ULL;
        x ^= x >> 33;
        return static_cast<std::size_t>(x);
    }
};

}  // namespace snow

#endif
