#include "heightlab/io.hpp"

#include <fstream>
#include <sstream>

#include "heightlab/errors.hpp"

namespace heightlab {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    fail(errc::invalid_input, path + ": " + what);
}

BigRat rat_at(const json& j, const std::string& path) {
    if (!j.is_string()) bad(path, "expected a rational string like \"3/4\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const error& e) {
        bad(path, e.what());
    }
}

RatMatrix matrix_at(const json& j, const std::string& path, bool require_square = true) {
    if (!j.is_array() || j.empty()) bad(path, "expected a row-major matrix of strings");
    size_t n = j.size();
    RatMatrix m(n);
    for (size_t i = 0; i < n; ++i) {
        const json& row = j[i];
        if (!row.is_array() || (require_square && row.size() != n))
            bad(path + "[" + std::to_string(i) + "]", "expected a square matrix row");
        for (size_t k = 0; k < row.size(); ++k)
            m.at(i, k) = rat_at(row[k], path + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    return m;
}

RatVector vector_at(const json& j, const std::string& path) {
    if (!j.is_array()) bad(path, "expected an array of rational strings");
    RatVector v;
    for (size_t i = 0; i < j.size(); ++i) v.push_back(rat_at(j[i], path + "[" + std::to_string(i) + "]"));
    return v;
}

BinaryForm form_at(const json& j, const std::string& path) {
    BinaryForm f;
    if (!j.is_array() || j.size() < 2) bad(path, "expected ascending coefficient strings");
    for (size_t i = 0; i < j.size(); ++i) {
        BigRat c = rat_at(j[i], path + "[" + std::to_string(i) + "]");
        if (c.get_den() != 1) bad(path, "form coefficients must be integers");
        f.c.push_back(BigInt(c.get_num()));
    }
    while (f.c.size() > 1 && f.c.back() == 0) f.c.pop_back();
    return f;
}

EPoint epoint_from_text(const EllipticCurve& E, const std::string& text, const std::string& path) {
    if (text == "O" || text == "o" || text == "inf") return EPoint::O();
    auto comma = text.find(',');
    if (comma == std::string::npos) bad(path, "curve points are \"x,y\" or \"O\"");
    EPoint P = EPoint::affine(parse_rational(text.substr(0, comma)),
                              parse_rational(text.substr(comma + 1)));
    if (!E.on_curve(P)) bad(path, "point is not on the curve");
    return P;
}

RatMatrix cm_block_action(size_t r, unsigned long d) {
    RatMatrix J(2 * r);
    for (size_t i = 0; i < r; ++i) {
        J.at(2 * i, 2 * i + 1) = BigRat(-(long)d);
        J.at(2 * i + 1, 2 * i) = 1;
    }
    return J;
}

System parse_system_inner(const json& doc, const std::string& path) {
    if (!doc.is_object()) bad(path, "expected a system object");
    if (!doc.contains("kind") || !doc["kind"].is_string()) bad(path + ".kind", "missing kind");
    std::string kind = doc["kind"].get<std::string>();
    std::string label = doc.value("label", kind);

    if (kind == "p1_morphism") {
        if (!doc.contains("numerator") || !doc.contains("denominator"))
            bad(path, "p1_morphism needs numerator and denominator");
        BinaryForm num = form_at(doc["numerator"], path + ".numerator");
        BinaryForm den = form_at(doc["denominator"], path + ".denominator");
        // pad to the common degree so constants denote degenerate rows clearly
        size_t deg = std::max(num.c.size(), den.c.size());
        num.c.resize(deg, BigInt(0));
        den.c.resize(deg, BigInt(0));
        return System{P1Morphism::validate(num, den), label};
    }
    if (kind == "lattice") {
        if (!doc.contains("matrix")) bad(path + ".matrix", "missing matrix");
        unsigned long cm_d = doc.value("cm_d", 0ul);
        RatVector tr;
        if (doc.contains("translation")) tr = vector_at(doc["translation"], path + ".translation");
        if (cm_d > 0) {
            if (!doc.contains("matrix_omega"))
                bad(path + ".matrix_omega", "CM mode needs the omega part");
            CMMatrix cm;
            cm.real_part = matrix_at(doc["matrix"], path + ".matrix");
            cm.omega_part = matrix_at(doc["matrix_omega"], path + ".matrix_omega");
            cm.cm_d = cm_d;
            size_t r = cm.real_part.dim();
            RatMatrix G = doc.contains("gram") ? matrix_at(doc["gram"], path + ".gram")
                                               : RatMatrix::identity(2 * r);
            GramForm gram = GramForm::from_rational(G, cm_block_action(r, cm_d), cm_d);
            return System{LatticeSystem::make_cm(cm, tr, gram), label};
        }
        RatMatrix A = matrix_at(doc["matrix"], path + ".matrix");
        RatMatrix G = doc.contains("gram") ? matrix_at(doc["gram"], path + ".gram")
                                           : RatMatrix::identity(A.dim());
        return System{LatticeSystem::make(A, tr, GramForm::from_rational(G)), label};
    }
    if (kind == "concrete_abelian") {
        if (!doc.contains("curve") || !doc["curve"].is_array() || doc["curve"].size() != 5)
            bad(path + ".curve", "expected the five Weierstrass coefficients");
        EllipticCurve E(rat_at(doc["curve"][0], path + ".curve[0]"),
                        rat_at(doc["curve"][1], path + ".curve[1]"),
                        rat_at(doc["curve"][2], path + ".curve[2]"),
                        rat_at(doc["curve"][3], path + ".curve[3]"),
                        rat_at(doc["curve"][4], path + ".curve[4]"));
        if (!doc.contains("matrix")) bad(path + ".matrix", "missing matrix");
        RatMatrix A = matrix_at(doc["matrix"], path + ".matrix");
        std::vector<EPoint> tr;
        if (doc.contains("translation")) {
            const json& t = doc["translation"];
            if (!t.is_array()) bad(path + ".translation", "expected point strings");
            for (size_t i = 0; i < t.size(); ++i)
                tr.push_back(epoint_from_text(E, t[i].get<std::string>(),
                                              path + ".translation[" + std::to_string(i) + "]"));
        }
        return System{ConcreteAbelianSystem::make(E, A, tr), label};
    }
    if (kind == "wehler") {
        if (!doc.contains("form") || !doc["form"].is_array() || doc["form"].size() != 27)
            bad(path + ".form", "expected exactly 27 coefficient strings");
        std::array<BigInt, 27> form;
        for (size_t i = 0; i < 27; ++i) {
            BigRat c = rat_at(doc["form"][i], path + ".form[" + std::to_string(i) + "]");
            if (c.get_den() != 1) bad(path + ".form", "form coefficients must be integers");
            form[i] = BigInt(c.get_num());
        }
        if (!doc.contains("word") || !doc["word"].is_array())
            bad(path + ".word", "expected the involution word");
        std::vector<int> word;
        for (size_t i = 0; i < doc["word"].size(); ++i) {
            std::string w = doc["word"][i].get<std::string>();
            if (w == "sx" || w == "x")
                word.push_back(0);
            else if (w == "sy" || w == "y")
                word.push_back(1);
            else if (w == "sz" || w == "z")
                word.push_back(2);
            else
                bad(path + ".word[" + std::to_string(i) + "]", "letters are sx, sy, sz");
        }
        return System{WehlerSystem::validate(form, word), label};
    }
    if (kind == "picard") {
        if (!doc.contains("matrix")) bad(path + ".matrix", "missing matrix");
        PicardAction pa;
        pa.matrix = matrix_at(doc["matrix"], path + ".matrix");
        pa.label = label;
        if (doc.contains("cone")) {
            const json& cone = doc["cone"];
            if (!cone.is_array()) bad(path + ".cone", "expected generator rows");
            for (size_t i = 0; i < cone.size(); ++i)
                pa.cone_generators.push_back(vector_at(cone[i], path + ".cone[" + std::to_string(i) + "]"));
        }
        return System{pa, label};
    }
    if (kind == "product") {
        if (!doc.contains("left") || !doc.contains("right"))
            bad(path, "product needs left and right subsystems");
        auto left = std::make_shared<System>(parse_system_inner(doc["left"], path + ".left"));
        auto right = std::make_shared<System>(parse_system_inner(doc["right"], path + ".right"));
        return System{ProductSystem{left, right}, label};
    }
    bad(path + ".kind", "unknown kind '" + kind + "'");
}

ProjectivePoint parse_p1_point(const std::string& text, const std::string& path) {
    if (text == "inf" || text == "1:0") return ProjectivePoint::from_integers({BigInt(1), BigInt(0)});
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        BigRat p = parse_rational(text.substr(0, colon));
        BigRat q = parse_rational(text.substr(colon + 1));
        if (p == 0 && q == 0) bad(path, "0:0 is not a point");
        return ProjectivePoint::normalize({p, q});
    }
    return ProjectivePoint::normalize({parse_rational(text), BigRat(1)});
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else
            cur += c;
    }
    out.push_back(cur);
    return out;
}

} // namespace

System parse_system(const json& doc) {
    if (!doc.is_object()) fail(errc::invalid_input, "$: expected a JSON object");
    if (!doc.contains("schema") || !doc["schema"].is_number_integer() ||
        doc["schema"].get<int>() != schema_version)
        fail(errc::invalid_input, "$.schema: expected the integer " + std::to_string(schema_version));
    return parse_system_inner(doc, "$");
}

System load_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::invalid_input, "cannot open system file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        fail(errc::invalid_input, path + ": JSON parse error: " + e.what());
    }
    return parse_system(doc);
}

SystemPoint parse_point(const System& sys, const std::string& text) {
    return std::visit(
        [&](const auto& s) -> SystemPoint {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, P1Morphism>) {
                return parse_p1_point(text, "point");
            } else if constexpr (std::is_same_v<T, LatticeSystem>) {
                RatVector v;
                for (const auto& part : split(text, ',')) v.push_back(parse_rational(part));
                if (v.size() != s.rank())
                    fail(errc::invalid_input, "point: expected " + std::to_string(s.rank()) +
                                                  " coordinates");
                return v;
            } else if constexpr (std::is_same_v<T, ConcreteAbelianSystem>) {
                std::vector<EPoint> pts;
                for (const auto& part : split(text, ';'))
                    pts.push_back(epoint_from_text(s.curve, part, "point"));
                if (pts.size() != s.r)
                    fail(errc::invalid_input, "point: expected " + std::to_string(s.r) + " coordinates");
                return pts;
            } else if constexpr (std::is_same_v<T, WehlerSystem>) {
                auto parts = split(text, ';');
                if (parts.size() != 3)
                    fail(errc::invalid_input, "point: wehler points are \"x0:x1;y0:y1;z0:z1\"");
                WehlerPoint P{parse_p1_point(parts[0], "point.x"), parse_p1_point(parts[1], "point.y"),
                              parse_p1_point(parts[2], "point.z")};
                if (!s.contains(P)) fail(errc::invalid_input, "point: not on the surface");
                return P;
            } else if constexpr (std::is_same_v<T, PicardAction>) {
                fail(errc::invalid_input, "point: Picard-only systems have no points");
            } else {
                // products: "(left)x(right)" with balanced parentheses
                if (text.size() < 5 || text.front() != '(')
                    fail(errc::invalid_input, "point: product points are \"(left)x(right)\"");
                int depth = 0;
                size_t splitpos = std::string::npos;
                for (size_t i = 0; i < text.size(); ++i) {
                    if (text[i] == '(') ++depth;
                    if (text[i] == ')') {
                        --depth;
                        if (depth == 0 && i + 2 < text.size() && text[i + 1] == 'x' &&
                            text[i + 2] == '(') {
                            splitpos = i;
                            break;
                        }
                    }
                }
                if (splitpos == std::string::npos)
                    fail(errc::invalid_input, "point: product points are \"(left)x(right)\"");
                std::string lt = text.substr(1, splitpos - 1);
                std::string rt = text.substr(splitpos + 3, text.size() - splitpos - 4);
                auto pp = std::make_shared<const ProductPoint>(
                    ProductPoint{parse_point(*s.left, lt), parse_point(*s.right, rt)});
                return SystemPoint{pp};
            }
        },
        sys.value);
}

std::string render_ball(const BallReal& b, int sig_figs) { return b.midpoint_str(sig_figs); }

json ReportTable::to_json() const {
    json j;
    j["metadata"] = {{"label", label},
                     {"delta", {{"lo", delta_lo}, {"hi", delta_hi}}},
                     {"l", l},
                     {"mode", mode},
                     {"version", version}};
    if (!delta_exact.empty()) j["metadata"]["delta"]["exact"] = delta_exact;
    j["columns"] = columns;
    j["rows"] = json::array();
    for (const auto& r : rows) {
        json row = {{"n", r.n}, {"h", r.h}, {"a", r.a}, {"flags", r.flags}};
        if (!r.h_exact.empty()) row["h_exact"] = r.h_exact;
        if (!r.a_exact.empty()) row["a_exact"] = r.a_exact;
        j["rows"].push_back(row);
    }
    return j;
}

static std::string csv_quote(const std::string& s) {
    bool needs = s.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

std::string ReportTable::to_csv() const {
    std::ostringstream os;
    for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << csv_quote(columns[i]);
    os << "\n";
    for (const auto& r : rows) {
        os << csv_quote(r.n) << "," << csv_quote(r.h) << "," << csv_quote(r.a) << ","
           << csv_quote(r.h_exact) << "," << csv_quote(r.a_exact) << "," << csv_quote(r.flags)
           << "\n";
    }
    return os.str();
}

ReportTable series_table(const System& sys, const HeightSeries& hs, int sig_figs) {
    ReportTable t;
    t.columns = {"n", "h_n", "a_n", "h_exact", "a_exact", "flags"};
    t.label = sys.label;
    t.delta_lo = BallReal::exact(hs.delta.lo_rat()).midpoint_str(sig_figs);
    t.delta_hi = BallReal::exact(hs.delta.hi_rat()).midpoint_str(sig_figs);
    if (hs.delta_exact) t.delta_exact = to_string(*hs.delta_exact);
    t.l = hs.l;
    t.mode = to_string(hs.truncation);
    for (const auto& row : hs.rows) {
        ReportRow r;
        r.n = std::to_string(row.n);
        r.h = render_ball(row.h.value, sig_figs);
        r.a = render_ball(row.a, sig_figs);
        if (row.h.exact_value) r.h_exact = to_string(*row.h.exact_value);
        if (row.h.exact_core) r.h_exact = "log(" + row.h.exact_core->get_str() + ")";
        if (row.a_exact) r.a_exact = to_string(*row.a_exact);
        t.rows.push_back(std::move(r));
    }
    return t;
}

} // namespace heightlab
