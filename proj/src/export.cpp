#include "nlbif/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "nlbif/errors.hpp"

namespace nlbif {

using nlohmann::json;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string ccurve_csv(const CCurve& curve) {
    std::ostringstream os;
    os << "r,lambda,c,dc\n";
    for (const auto& s : curve.samples()) {
        os << fmt(s.r) << ',' << fmt(s.lambda) << ',' << fmt(s.c) << ',' << fmt(s.dc) << '\n';
    }
    return os.str();
}

std::string profile_csv(const EquilibriumCI& eq) {
    std::ostringstream os;
    os << "x,phi,phi_x\n";
    for (std::size_t i = 0; i < eq.x.size(); ++i) {
        os << fmt(eq.x[i]) << ',' << fmt(eq.phi[i]) << ',' << fmt(eq.phi_x[i]) << '\n';
    }
    return os.str();
}

std::string equilibria_csv(const EquilibriumSet& set) {
    std::ostringstream os;
    os << "id,j,sign,nu,r,lambda,c,dc,hyperbolic,morse_index,criterion_gap,tangency\n";
    os << "zero,0,,";
    os << fmt(set.nu) << ",0,,,," << (set.zero.hyperbolic ? 1 : 0) << ',' << set.zero.morse_index << ",,0\n";
    for (const auto& p : set.points) {
        os << p.j << to_symbol(p.sign) << ',' << p.j << ',' << to_symbol(p.sign) << ',' << fmt(p.nu) << ','
           << fmt(p.r) << ',' << fmt(p.lambda) << ',' << fmt(p.c) << ',' << fmt(p.dc) << ','
           << (p.hyperbolic ? 1 : 0) << ',' << p.morse_index << ',' << fmt(p.criterion_gap) << ','
           << (p.tangency ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string branches_csv(const BifurcationDiagram& d) {
    std::ostringstream os;
    os << "j,sign,nu,r,morse_index\n";
    for (const auto& b : d.branches) {
        for (const auto& v : b.vertices) {
            os << b.j << ',' << to_symbol(b.sign) << ',' << fmt(v.nu) << ',' << fmt(v.r) << ',' << v.morse_index
               << '\n';
        }
    }
    return os.str();
}

std::string counts_csv(const BifurcationDiagram& d) {
    std::ostringstream os;
    os << "nu,predicted,direct,near_event\n";
    for (const auto& c : d.counts) {
        os << fmt(c.nu) << ',' << c.predicted << ',' << c.direct << ',' << (c.near_event ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string trajectory_csv(const TrajectoryLog& log) {
    std::ostringstream os;
    os << "t,V,dt,residual,dist_h1,dist_max,nearest\n";
    for (const auto& e : log.entries) {
        os << fmt(e.t) << ',' << fmt(e.V) << ',' << fmt(e.dt) << ',' << fmt(e.residual) << ',' << fmt(e.dist_h1)
           << ',' << fmt(e.dist_max) << ',' << e.nearest << '\n';
    }
    return os.str();
}

std::string epsilon_csv(const EpsilonSweep& sweep) {
    std::ostringstream os;
    os << "eps";
    const std::size_t m = sweep.branches.empty() ? 0 : sweep.branches.front().size();
    for (std::size_t k = 1; k <= m; ++k) os << ",mu" << k;
    os << '\n';
    for (std::size_t i = 0; i < sweep.eps.size(); ++i) {
        os << fmt(sweep.eps[i]);
        for (double mu : sweep.branches[i]) os << ',' << fmt(mu);
        os << '\n';
    }
    return os.str();
}

json events_json(const BifurcationDiagram& d) {
    json events = json::array();
    for (const auto& e : d.events) {
        json item{{"kind", to_string(e.kind)}, {"nu", e.nu},   {"r", e.r},
                  {"j", e.j},                  {"direction", to_string(e.direction)}};
        if (e.kind != EventKind::pitchfork) item["sign"] = to_symbol(e.sign);
        events.push_back(item);
    }
    return json{{"nu_min", d.nu_min}, {"nu_max", d.nu_max}, {"events", events}, {"warnings", d.warnings},
                {"counts_consistent", d.counts_consistent()}};
}

json spectral_json(const SpectralReport& rep) {
    json trace = json::array();
    for (const auto& lv : rep.trace) {
        trace.push_back({{"n", lv.n}, {"top", lv.top}, {"positive", lv.positive}, {"min_abs", lv.min_abs}});
    }
    return json{{"eigenvalues", rep.eigenvalues},       {"positive", rep.positive},
                {"min_abs", rep.min_abs},               {"indeterminate", rep.indeterminate},
                {"observed_order", rep.observed_order}, {"trace", trace}};
}

std::string diagram_svg(const BifurcationDiagram& d, double r_cap) {
    const double W = 800, H = 500, L = 60, R = 20, T = 20, B = 50;
    const double nu_lo = d.nu_min, nu_hi = d.nu_max;
    if (r_cap <= 0.0) {
        r_cap = 0.0;
        for (const auto& b : d.branches) {
            for (const auto& v : b.vertices) {
                if (v.nu >= nu_lo && v.nu <= nu_hi) r_cap = std::max(r_cap, v.r);
            }
        }
        if (r_cap <= 0.0) r_cap = 1.0;
        r_cap *= 1.05;
    }
    auto X = [&](double nu) { return L + (nu - nu_lo) / (nu_hi - nu_lo) * (W - L - R); };
    auto Y = [&](double r) { return H - B - r / r_cap * (H - T - B); };
    static const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"};
    auto colour = [&](int idx) { return palette[std::clamp(idx, 0, 5)]; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
       << W << ' ' << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double nu = nu_lo + (nu_hi - nu_lo) * i / 5, r = r_cap * i / 5;
        os << "<text x=\"" << X(nu) << "\" y=\"" << H - B + 18 << "\" font-size=\"11\" text-anchor=\"middle\">"
           << fmt(std::round(nu * 1000) / 1000) << "</text>\n";
        os << "<text x=\"" << L - 6 << "\" y=\"" << Y(r) + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
           << fmt(std::round(r * 1000) / 1000) << "</text>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" font-size=\"13\" text-anchor=\"middle\">nu</text>\n";
    os << "<text x=\"15\" y=\"" << (T + H - B) / 2 << "\" font-size=\"13\">r</text>\n";
    // Zero branch.
    os << "<line x1=\"" << X(nu_lo) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(nu_hi) << "\" y2=\"" << Y(0)
       << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    auto inside = [&](const BranchVertex& v) { return v.nu >= nu_lo && v.nu <= nu_hi && v.r <= r_cap; };
    for (const auto& b : d.branches) {
        for (std::size_t k = 0; k + 1 < b.vertices.size(); ++k) {
            const auto& p = b.vertices[k];
            const auto& q = b.vertices[k + 1];
            if (!inside(p) || !inside(q)) continue;
            os << "<line x1=\"" << X(p.nu) << "\" y1=\"" << Y(p.r) << "\" x2=\"" << X(q.nu) << "\" y2=\"" << Y(q.r)
               << "\" stroke=\"" << colour(q.morse_index) << "\" stroke-width=\"1.5\"/>\n";
        }
    }
    for (const auto& e : d.events) {
        if (e.nu < nu_lo || e.nu > nu_hi || e.r > r_cap) continue;
        if (e.kind == EventKind::pitchfork) {
            os << "<circle cx=\"" << X(e.nu) << "\" cy=\"" << Y(e.r) << "\" r=\"4\" fill=\"black\"/>\n";
        } else {
            const double x = X(e.nu), y = Y(e.r);
            os << "<polygon points=\"" << x << ',' << y - 5 << ' ' << x - 4.5 << ',' << y + 4 << ' ' << x + 4.5
               << ',' << y + 4 << "\" fill=\"" << (e.kind == EventKind::degenerate ? "red" : "black") << "\"/>\n";
        }
    }
    for (int idx = 0; idx <= 4; ++idx) {
        os << "<text x=\"" << W - R - 110 << "\" y=\"" << T + 14 * (idx + 1) << "\" font-size=\"11\" fill=\""
           << colour(idx) << "\">Morse index " << idx << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("sha256: cannot read " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 15];
    while (in) {
        in.read(buf, sizeof buf);
        if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    char two[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(two, sizeof two, "%02x", digest[i]);
        hex += two;
    }
    return hex;
}

void ArtifactWriter::write(const std::string& relative, const std::string& content) {
    const std::filesystem::path full = root_ / relative;
    std::filesystem::create_directories(full.parent_path());
    std::ofstream out(full, std::ios::binary);
    if (!out) throw Error("cannot write " + full.string());
    out << content;
    if (std::find(written_.begin(), written_.end(), relative) == written_.end()) written_.push_back(relative);
}

void ArtifactWriter::write_json(const std::string& relative, const json& doc) { write(relative, doc.dump(2) + "\n"); }

} // namespace nlbif
