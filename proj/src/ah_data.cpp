#include "ahq/ah_data.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace ahq {

AHExpansionData AHExpansionData::zero(const GridPtr& grid) {
    return AHExpansionData{ScalarField(grid), ScalarField(grid), ScalarField(grid),
                           OneFormField(grid), OneFormField(grid),
                           SymTensorField(grid), SymTensorField(grid), SymTensorField(grid),
                           SymTensorField(grid), SymTensorField(grid), SymTensorField(grid),
                           std::nullopt};
}

AHExpansionData AHExpansionData::scaled(double lambda) const {
    AHExpansionData out = *this;
    out.g_rr_m5 *= lambda;
    out.g_rr_m6 *= lambda;
    out.p_rr_m4 *= lambda;
    out.g_ra_m3 *= lambda;
    out.p_ra_m3 *= lambda;
    out.g_ab_0 *= lambda;
    out.g_ab_m1 *= lambda;
    out.g_ab_m2 *= lambda;
    out.p_ab_0 *= lambda;
    out.p_ab_m1 *= lambda;
    out.p_ab_m2 *= lambda;
    if (out.matter_F)
        *out.matter_F *= lambda;
    return out;
}

BoostVector BoostVector::from_rapidity(double rapidity, int axis) {
    if (axis < 1 || axis > 3)
        throw std::invalid_argument("BoostVector: axis must be 1, 2, or 3");
    BoostVector b;
    b.a0 = std::cosh(rapidity);
    b.a[axis - 1] = std::sinh(rapidity);
    return b;
}

BoostVector BoostVector::from_spatial(const std::array<double, 3>& v) {
    BoostVector b;
    b.a = v;
    b.a0 = std::sqrt(1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return b;
}

bool BoostVector::valid(double tol) const {
    if (!(a0 > 0.0))
        return false;
    const double q = a0 * a0 - (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    return std::abs(q - 1.0) <= tol * std::max(1.0, a0 * a0);
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

namespace {

void check_finite(ValidationReport& rep, const char* name, bool finite) {
    if (!finite)
        rep.issues.push_back({name, "non-finite values", std::numeric_limits<double>::quiet_NaN()});
}

void check_traceless(ValidationReport& rep, const char* name, const SymTensorField& T, double tol) {
    const double worst = trace(T).max_abs();
    if (worst > tol)
        rep.issues.push_back({name, "trace exceeds tolerance", worst});
}

} // namespace

ValidationReport validate(const AHExpansionData& d) {
    ValidationReport rep;
    check_finite(rep, "g_rr_m5", d.g_rr_m5.all_finite());
    check_finite(rep, "g_rr_m6", d.g_rr_m6.all_finite());
    check_finite(rep, "p_rr_m4", d.p_rr_m4.all_finite());
    check_finite(rep, "g_ra_m3", d.g_ra_m3.all_finite());
    check_finite(rep, "p_ra_m3", d.p_ra_m3.all_finite());
    check_finite(rep, "g_ab_0", d.g_ab_0.all_finite());
    check_finite(rep, "g_ab_m1", d.g_ab_m1.all_finite());
    check_finite(rep, "g_ab_m2", d.g_ab_m2.all_finite());
    check_finite(rep, "p_ab_0", d.p_ab_0.all_finite());
    check_finite(rep, "p_ab_m1", d.p_ab_m1.all_finite());
    check_finite(rep, "p_ab_m2", d.p_ab_m2.all_finite());
    if (d.matter_F)
        check_finite(rep, "matter_F", d.matter_F->all_finite());
    check_traceless(rep, "g_ab_0", d.g_ab_0, 1e-10);
    check_traceless(rep, "p_ab_0", d.p_ab_0, 1e-10);
    return rep;
}

std::string ValidationReport::to_string() const {
    if (issues.empty())
        return "ok";
    std::ostringstream os;
    for (const auto& i : issues)
        os << i.field << ": " << i.what << " (max violation " << i.magnitude << ")\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// generators
// ---------------------------------------------------------------------------

AHExpansionData generate_minkowski_hyperboloid(const GridPtr& grid) { return AHExpansionData::zero(grid); }

AHExpansionData generate_schwarzschild_aspect(const GridPtr& grid, double m0) {
    AHExpansionData d = AHExpansionData::zero(grid);
    for (double& v : d.g_rr_m5.values())
        v = 2.0 * m0;
    return d;
}

namespace {

YlmSpectrum random_spectrum(const GridPtr& grid, std::mt19937_64& rng, int lmin, int lmax, double amplitude) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    YlmSpectrum s(grid->band_limit());
    lmax = std::min(lmax, grid->band_limit());
    for (int ell = lmin; ell <= lmax; ++ell)
        for (int m = -ell; m <= ell; ++m)
            s(ell, m) = amplitude * u(rng);
    return s;
}

ScalarField random_scalar(const GridPtr& grid, std::mt19937_64& rng, int lmax, double amplitude) {
    return synthesize(random_spectrum(grid, rng, 0, lmax, amplitude), grid);
}

OneFormField random_oneform(const GridPtr& grid, std::mt19937_64& rng, int lmax, double amplitude) {
    OneFormPotentials p{random_spectrum(grid, rng, 1, lmax, amplitude),
                        random_spectrum(grid, rng, 1, lmax, amplitude)};
    return synthesize_oneform(p, grid);
}

SymTensorField random_tensor(const GridPtr& grid, std::mt19937_64& rng, int lmax, double amplitude, bool traceless) {
    TensorPotentials p{traceless ? YlmSpectrum(grid->band_limit())
                                 : random_spectrum(grid, rng, 0, lmax, amplitude),
                       random_spectrum(grid, rng, 2, lmax, amplitude),
                       random_spectrum(grid, rng, 2, lmax, amplitude)};
    return synthesize_tensor(p, grid);
}

} // namespace

AHExpansionData generate_random_bandlimited(const GridPtr& grid, const RandomDataParams& params) {
    if (params.lmax < 2 || params.lmax > grid->band_limit())
        throw std::invalid_argument("generate_random_bandlimited: lmax out of range");
    std::mt19937_64 rng(params.seed);
    const int L = params.lmax;
    const double A = params.amplitude;
    AHExpansionData d = AHExpansionData::zero(grid);
    d.g_rr_m5 = random_scalar(grid, rng, L, A);
    d.g_rr_m6 = random_scalar(grid, rng, L, A);
    d.p_rr_m4 = random_scalar(grid, rng, L, A);
    d.g_ra_m3 = random_oneform(grid, rng, L, A);
    d.p_ra_m3 = random_oneform(grid, rng, L, A);
    d.g_ab_0 = random_tensor(grid, rng, L, A, true);
    d.g_ab_m1 = random_tensor(grid, rng, L, A, false);
    d.g_ab_m2 = random_tensor(grid, rng, L, A, false);
    d.p_ab_0 = random_tensor(grid, rng, L, A, true);
    d.p_ab_m1 = random_tensor(grid, rng, L, A, false);
    d.p_ab_m2 = random_tensor(grid, rng, L, A, false);
    if (params.with_matter)
        d.matter_F = random_scalar(grid, rng, L, A);
    if (params.zero_momentum)
        return project_zero_momentum(d);
    return d;
}

AHExpansionData project_zero_momentum(const AHExpansionData& d) {
    // mass aspect = 3/2 tr g_ab_m1 + tr p_ab_m1 + g_rr_m5; its ell=1 modes are
    // absorbed into g_rr_m5
    ScalarField aspect = 1.5 * trace(d.g_ab_m1) + trace(d.p_ab_m1) + d.g_rr_m5;
    YlmSpectrum s = analyze(aspect);
    YlmSpectrum ell1(d.grid()->band_limit());
    for (int m = -1; m <= 1; ++m)
        ell1(1, m) = s(1, m);
    AHExpansionData out = d;
    out.g_rr_m5 -= synthesize(ell1, d.grid());
    return out;
}

// ---------------------------------------------------------------------------
// file I/O
// ---------------------------------------------------------------------------

namespace {

void write_values(std::FILE* f, const ScalarField& v) {
    const SphereGrid& g = *v.grid();
    for (int j = 0; j < g.nlat(); ++j) {
        for (int k = 0; k < g.nlon(); ++k)
            std::fprintf(f, k ? " %.17g" : "%.17g", v(j, k));
        std::fprintf(f, "\n");
    }
}

void write_scalar_block(std::FILE* f, const char* name, const ScalarField& v) {
    std::fprintf(f, "field %s scalar\ncomponent values\n", name);
    write_values(f, v);
}

void write_oneform_block(std::FILE* f, const char* name, const OneFormField& v) {
    std::fprintf(f, "field %s oneform\ncomponent theta\n", name);
    write_values(f, v.comp_theta());
    std::fprintf(f, "component phi\n");
    write_values(f, v.comp_phi());
}

void write_tensor_block(std::FILE* f, const char* name, const SymTensorField& v) {
    std::fprintf(f, "field %s tensor\ncomponent theta_theta\n", name);
    write_values(f, v.comp_tt());
    std::fprintf(f, "component theta_phi\n");
    write_values(f, v.comp_tp());
    std::fprintf(f, "component phi_phi\n");
    write_values(f, v.comp_pp());
}

struct Scanner {
    std::ifstream in;
    int line = 0;
    std::istringstream cur;

    explicit Scanner(const std::string& path) : in(path) {
        if (!in)
            throw std::runtime_error("cannot open " + path);
    }

    bool next_line() {
        std::string s;
        while (std::getline(in, s)) {
            ++line;
            if (s.find_first_not_of(" \t\r\n") == std::string::npos)
                continue;
            cur = std::istringstream(s);
            return true;
        }
        return false;
    }

    void read_values(ScalarField& v) {
        const SphereGrid& g = *v.grid();
        for (int j = 0; j < g.nlat(); ++j) {
            if (!next_line())
                throw ParseError("unexpected end of file inside value block", line);
            for (int k = 0; k < g.nlon(); ++k)
                if (!(cur >> v(j, k)))
                    throw ParseError("expected " + std::to_string(g.nlon()) + " values in row", line);
            double extra;
            if (cur >> extra)
                throw ParseError("too many values in row", line);
        }
    }

    void expect_component(const std::string& want) {
        if (!next_line())
            throw ParseError("expected 'component " + want + "'", line);
        std::string kw, name;
        cur >> kw >> name;
        if (kw != "component" || name != want)
            throw ParseError("expected 'component " + want + "', got '" + kw + " " + name + "'", line);
    }
};

} // namespace

void write_data(const AHExpansionData& d, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f)
        throw std::runtime_error("cannot open " + path + " for writing");
    const SphereGrid& g = *d.grid();
    std::fprintf(f, "format_version 1\nband_limit %d\nnlat %d\nnlon %d\n", g.band_limit(), g.nlat(), g.nlon());
    write_scalar_block(f, "g_rr_m5", d.g_rr_m5);
    write_scalar_block(f, "g_rr_m6", d.g_rr_m6);
    write_scalar_block(f, "p_rr_m4", d.p_rr_m4);
    write_oneform_block(f, "g_ra_m3", d.g_ra_m3);
    write_oneform_block(f, "p_ra_m3", d.p_ra_m3);
    write_tensor_block(f, "g_ab_0", d.g_ab_0);
    write_tensor_block(f, "g_ab_m1", d.g_ab_m1);
    write_tensor_block(f, "g_ab_m2", d.g_ab_m2);
    write_tensor_block(f, "p_ab_0", d.p_ab_0);
    write_tensor_block(f, "p_ab_m1", d.p_ab_m1);
    write_tensor_block(f, "p_ab_m2", d.p_ab_m2);
    if (d.matter_F)
        write_scalar_block(f, "matter_F", *d.matter_F);
    std::fprintf(f, "end\n");
    std::fclose(f);
}

AHExpansionData read_data(const std::string& path) {
    Scanner sc(path);
    auto header_int = [&](const std::string& key) {
        if (!sc.next_line())
            throw ParseError("missing header key " + key, sc.line);
        std::string kw;
        long long v = 0;
        sc.cur >> kw >> v;
        if (kw != key)
            throw ParseError("expected header key '" + key + "', got '" + kw + "'", sc.line);
        return v;
    };
    const long long version = header_int("format_version");
    if (version != 1)
        throw ParseError("unsupported format_version " + std::to_string(version), sc.line);
    const long long L = header_int("band_limit");
    if (L < 1 || L > 128)
        throw ParseError("band_limit out of range [1,128]", sc.line);
    const long long nlat = header_int("nlat");
    const long long nlon = header_int("nlon");
    GridPtr grid = make_grid(static_cast<int>(L));
    if (nlat != grid->nlat() || nlon != grid->nlon())
        throw ParseError("grid mismatch: band_limit " + std::to_string(L) + " requires nlat " +
                             std::to_string(grid->nlat()) + ", nlon " + std::to_string(grid->nlon()),
                         sc.line);

    AHExpansionData d = AHExpansionData::zero(grid);
    struct Slot {
        const char* name;
        const char* kind;
        bool seen = false;
    };
    Slot slots[] = {{"g_rr_m5", "scalar"}, {"g_rr_m6", "scalar"}, {"p_rr_m4", "scalar"},
                    {"g_ra_m3", "oneform"}, {"p_ra_m3", "oneform"}, {"g_ab_0", "tensor"},
                    {"g_ab_m1", "tensor"}, {"g_ab_m2", "tensor"}, {"p_ab_0", "tensor"},
                    {"p_ab_m1", "tensor"}, {"p_ab_m2", "tensor"}, {"matter_F", "scalar"}};

    auto scalar_by_name = [&](const std::string& n) -> ScalarField* {
        if (n == "g_rr_m5") return &d.g_rr_m5;
        if (n == "g_rr_m6") return &d.g_rr_m6;
        if (n == "p_rr_m4") return &d.p_rr_m4;
        if (n == "matter_F") {
            if (!d.matter_F)
                d.matter_F = ScalarField(grid);
            return &*d.matter_F;
        }
        return nullptr;
    };
    auto oneform_by_name = [&](const std::string& n) -> OneFormField* {
        if (n == "g_ra_m3") return &d.g_ra_m3;
        if (n == "p_ra_m3") return &d.p_ra_m3;
        return nullptr;
    };
    auto tensor_by_name = [&](const std::string& n) -> SymTensorField* {
        if (n == "g_ab_0") return &d.g_ab_0;
        if (n == "g_ab_m1") return &d.g_ab_m1;
        if (n == "g_ab_m2") return &d.g_ab_m2;
        if (n == "p_ab_0") return &d.p_ab_0;
        if (n == "p_ab_m1") return &d.p_ab_m1;
        if (n == "p_ab_m2") return &d.p_ab_m2;
        return nullptr;
    };

    bool ended = false;
    while (sc.next_line()) {
        std::string kw;
        sc.cur >> kw;
        if (kw == "end") {
            ended = true;
            break;
        }
        if (kw != "field")
            throw ParseError("expected 'field' or 'end', got '" + kw + "'", sc.line);
        std::string name, kind;
        sc.cur >> name >> kind;
        Slot* slot = nullptr;
        for (Slot& s : slots)
            if (name == s.name)
                slot = &s;
        if (!slot)
            throw ParseError("unknown field '" + name + "'", sc.line);
        if (slot->seen)
            throw ParseError("duplicate field '" + name + "'", sc.line);
        if (kind != slot->kind)
            throw ParseError("field '" + name + "' must be of kind '" + slot->kind + "'", sc.line);
        slot->seen = true;
        if (kind == "scalar") {
            sc.expect_component("values");
            sc.read_values(*scalar_by_name(name));
        } else if (kind == "oneform") {
            OneFormField* w = oneform_by_name(name);
            sc.expect_component("theta");
            sc.read_values(w->comp_theta());
            sc.expect_component("phi");
            sc.read_values(w->comp_phi());
        } else {
            SymTensorField* T = tensor_by_name(name);
            sc.expect_component("theta_theta");
            sc.read_values(T->comp_tt());
            sc.expect_component("theta_phi");
            sc.read_values(T->comp_tp());
            sc.expect_component("phi_phi");
            sc.read_values(T->comp_pp());
        }
    }
    if (!ended)
        throw ParseError("missing 'end' marker", sc.line);
    for (const Slot& s : slots) {
        const bool optional = std::string(s.name) == "matter_F";
        if (!s.seen && !optional)
            throw ParseError(std::string("missing required field '") + s.name + "'", sc.line);
    }
    return d;
}

void write_field(const ScalarField& f, const std::string& name, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp)
        throw std::runtime_error("cannot open " + path + " for writing");
    const SphereGrid& g = *f.grid();
    std::fprintf(fp, "format_version 1\nband_limit %d\nnlat %d\nnlon %d\n", g.band_limit(), g.nlat(), g.nlon());
    write_scalar_block(fp, name.c_str(), f);
    std::fprintf(fp, "end\n");
    std::fclose(fp);
}

ScalarField read_field(const std::string& path, std::string* name_out) {
    Scanner sc(path);
    auto header_int = [&](const std::string& key) {
        if (!sc.next_line())
            throw ParseError("missing header key " + key, sc.line);
        std::string kw;
        long long v = 0;
        sc.cur >> kw >> v;
        if (kw != key)
            throw ParseError("expected header key '" + key + "'", sc.line);
        return v;
    };
    if (header_int("format_version") != 1)
        throw ParseError("unsupported format_version", sc.line);
    const long long L = header_int("band_limit");
    header_int("nlat");
    header_int("nlon");
    GridPtr grid = make_grid(static_cast<int>(L));
    if (!sc.next_line())
        throw ParseError("missing field block", sc.line);
    std::string kw, name, kind;
    sc.cur >> kw >> name >> kind;
    if (kw != "field" || kind != "scalar")
        throw ParseError("expected a scalar field block", sc.line);
    if (name_out)
        *name_out = name;
    ScalarField f(grid);
    sc.expect_component("values");
    sc.read_values(f);
    return f;
}

} // namespace ahq
