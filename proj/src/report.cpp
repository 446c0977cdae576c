#include "classdiv/report.hpp"

#include <sstream>

namespace classdiv::report {

using json = nlohmann::ordered_json;
using theorems::Status;

json integer_json(BigInt const & v)
{
    if (mpz_fits_slong_p(v.get_mpz_t()))
        return json(static_cast<std::int64_t>(v.get_si()));
    return json(v.get_str());
}

namespace {

json parameter_json(std::string const & text)
{
    BigInt v;
    if (!text.empty() && v.set_str(text, 10) == 0)
        return integer_json(v);
    return json(text);
}

json parameters_json(std::vector<std::pair<std::string, std::string>> const & params)
{
    json j = json::object();
    for (auto const & [k, v] : params)
        j[k] = parameter_json(v);
    return j;
}

template <class T, class F>
json optional_json(std::optional<T> const & v, F && f)
{
    return v ? f(*v) : json(nullptr);
}

} // namespace

json to_json(theorems::VerificationReport const & r)
{
    json j;
    j["kind"] = r.kind;
    j["label"] = r.label;
    j["parameters"] = parameters_json(r.parameters);
    j["N"] = integer_json(r.N);
    j["d"] = integer_json(r.d);
    j["s"] = integer_json(r.s);
    j["discriminant"] = optional_json(r.discriminant, integer_json);
    j["case"] = optional_json(r.theorem_case,
                              [](theorems::TheoremCase c) { return json(theorems::to_string(c)); });
    j["predicted_divisor"] = r.predicted_divisor;
    j["class_number"] = optional_json(r.class_number, [](std::uint64_t h) { return json(h); });
    j["exact_divisor"] = optional_json(r.exact_divisor, [](unsigned long z) { return json(z); });
    j["decomposition"] = optional_json(r.decomposition, [](theorems::DecompositionWitness const & w) {
        json d;
        d["x1"] = integer_json(w.x1);
        d["y1"] = integer_json(w.y1);
        d["z1"] = w.z1;
        d["t"] = w.t;
        d["lambda1"] = w.lambda1;
        d["lambda2"] = w.lambda2;
        return d;
    });
    j["order_witness"] = optional_json(r.order_witness, [](classgroup::QuadForm const & f) {
        json o;
        o["a"] = integer_json(f.a());
        o["b"] = integer_json(f.b());
        o["c"] = integer_json(f.c());
        return o;
    });
    j["derivation"] = r.derivation;
    j["status"] = theorems::to_string(r.status);
    j["notes"] = r.notes;
    return j;
}

json to_json(ReportDocument const & doc)
{
    json j;
    j["schema"] = schema_id;
    j["command"] = doc.command;
    j["parameters"] = parameters_json(doc.parameters);
    j["results"] = json::array();
    for (auto const & r : doc.results)
        j["results"].push_back(to_json(r));

    json s;
    s["results"] = doc.results.size();
    std::size_t counts[4] = {};
    for (auto const & r : doc.results)
        ++counts[static_cast<int>(r.status)];
    s["pass"] = counts[static_cast<int>(Status::pass)];
    s["fail"] = counts[static_cast<int>(Status::fail)];
    s["out-of-lemma-scope"] = counts[static_cast<int>(Status::out_of_lemma_scope)];
    s["resource-limit"] = counts[static_cast<int>(Status::resource_limit)];
    if (doc.scan_summary) {
        s["candidates"] = doc.scan_summary->candidates;
        s["admissible"] = doc.scan_summary->admissible;
        json skipped = json::object();
        for (auto const & [reason, count] : doc.scan_summary->skipped)
            skipped[reason] = count;
        s["skipped"] = skipped;
    }
    j["summary"] = s;
    if (doc.elapsed_seconds) {
        json t;
        t["elapsed_seconds"] = *doc.elapsed_seconds;
        j["timing"] = t;
    }
    return j;
}

std::string render_json(ReportDocument const & doc)
{
    return to_json(doc).dump(2) + "\n";
}

namespace {

std::string csv_field(std::string const & s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + "\"";
}

std::string joined(std::vector<std::string> const & parts, char const * sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i)
        out += (i ? sep : "") + parts[i];
    return out;
}

template <class T>
std::string opt_str(std::optional<T> const & v)
{
    if (!v)
        return "";
    if constexpr (std::is_same_v<T, BigInt>)
        return v->get_str();
    else
        return std::to_string(*v);
}

} // namespace

std::string render_csv(ReportDocument const & doc)
{
    std::ostringstream out;
    out << "kind,label,status,N,d,s,discriminant,case,predicted_divisor,class_number,"
           "exact_divisor,x1,y1,z1,t,lambda1,lambda2,order_witness,notes\n";
    for (auto const & r : doc.results) {
        std::vector<std::string> row{
            r.kind,
            r.label,
            theorems::to_string(r.status),
            r.N.get_str(),
            r.d.get_str(),
            r.s.get_str(),
            opt_str(r.discriminant),
            r.theorem_case ? theorems::to_string(*r.theorem_case) : "",
            std::to_string(r.predicted_divisor),
            opt_str(r.class_number),
            opt_str(r.exact_divisor),
        };
        if (r.decomposition) {
            auto const & w = *r.decomposition;
            row.insert(row.end(), {w.x1.get_str(), w.y1.get_str(), std::to_string(w.z1),
                                   std::to_string(w.t), std::to_string(w.lambda1),
                                   std::to_string(w.lambda2)});
        } else {
            row.insert(row.end(), 6, "");
        }
        row.push_back(r.order_witness ? r.order_witness->to_string() : "");
        row.push_back(joined(r.notes, "; "));
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << csv_field(row[i]);
        out << '\n';
    }
    return out.str();
}

std::string render_text(ReportDocument const & doc)
{
    std::ostringstream out;
    for (auto const & r : doc.results) {
        out << r.label << ": " << theorems::to_string(r.status) << "  N=" << r.N
            << " d=" << r.d;
        if (r.class_number)
            out << " h=" << *r.class_number;
        out << " predicted=" << r.predicted_divisor;
        if (r.theorem_case)
            out << " case=" << theorems::to_string(*r.theorem_case);
        if (r.decomposition)
            out << " z1=" << r.decomposition->z1 << " t=" << r.decomposition->t;
        if (r.order_witness)
            out << " witness=" << r.order_witness->to_string();
        out << '\n';
        for (auto const & note : r.notes)
            out << "    " << note << '\n';
    }
    auto const j = to_json(doc)["summary"];
    out << "summary: " << j["results"].get<std::size_t>() << " results, "
        << j["pass"].get<std::size_t>() << " pass, " << j["fail"].get<std::size_t>()
        << " fail, " << j["out-of-lemma-scope"].get<std::size_t>() << " out-of-lemma-scope, "
        << j["resource-limit"].get<std::size_t>() << " resource-limit";
    if (doc.scan_summary) {
        out << "; " << doc.scan_summary->candidates << " candidates, "
            << doc.scan_summary->admissible << " admissible";
        for (auto const & [reason, count] : doc.scan_summary->skipped)
            out << ", " << reason << "=" << count;
    }
    out << '\n';
    if (doc.elapsed_seconds)
        out << "elapsed: " << *doc.elapsed_seconds << " s\n";
    return out.str();
}

int exit_code(ReportDocument const & doc)
{
    bool resource = false;
    for (auto const & r : doc.results) {
        if (r.status == Status::fail)
            return 1;
        resource = resource || r.status == Status::resource_limit;
    }
    return resource ? 3 : 0;
}

} // namespace classdiv::report
