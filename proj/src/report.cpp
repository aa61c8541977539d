#include "resbench/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace resbench {

namespace {

std::string sigma_text(const ProtocolResult& r)
{
    return r.family == ModelFamily::Esn ? format_double(r.hyper.sigma_w) : "NA";
}

std::string column_label(const ProtocolResult& r)
{
    std::string label = std::string(to_string(r.family)) + "_n" + std::to_string(r.hyper.size);
    if (r.family == ModelFamily::Esn) {
        label += "_sigma" + format_double(r.hyper.sigma_w);
    }
    return label;
}

CsvTable with_provenance(CsvTable t, const Provenance& p)
{
    auto lines = provenance_lines(p);
    lines.insert(lines.end(), t.comments.begin(), t.comments.end());
    t.comments = std::move(lines);
    return t;
}

} // namespace

ReportOutput write_report(const std::filesystem::path& dir, const ReportInputs& in,
                          const Provenance& provenance)
{
    ReportOutput out;
    std::filesystem::create_directories(dir);
    auto emit = [&](const std::string& name, const CsvTable& t) {
        const auto path = dir / name;
        write_csv(path, with_provenance(t, provenance));
        out.written.push_back(path);
    };

    if (in.results.empty()) {
        out.warnings.push_back("empty result set: tables contain headers only");
    }

    CsvTable longt;
    longt.header = {"task", "model", "n",    "sigma_w", "metric",
                    "split", "mean", "std", "runs",    "excluded"};
    CsvTable wide;
    wide.header = {"metric", "split"};
    for (const ProtocolResult& r : in.results) {
        wide.header.push_back(column_label(r) + "_mean");
        wide.header.push_back(column_label(r) + "_std");
    }
    for (Metric m : kMetrics) {
        for (Split s : kSplits) {
            std::vector<std::string> row = {to_string(m), to_string(s)};
            for (const ProtocolResult& r : in.results) {
                const MeanStd& c = r.report.at(m, s);
                longt.rows.push_back({std::string(to_string(r.report.task)),
                                      std::string(to_string(r.family)),
                                      std::to_string(r.hyper.size), sigma_text(r), to_string(m),
                                      to_string(s), format_double(c.mean), format_double(c.std),
                                      std::to_string(c.runs), std::to_string(c.excluded)});
                row.push_back(format_double(c.mean));
                row.push_back(format_double(c.std));
            }
            wide.rows.push_back(std::move(row));
        }
    }
    emit("tables.csv", longt);
    emit("table_wide.csv", wide);

    CsvTable curve;
    curve.header = {"model", "n", "sigma_w", "train_rnmse_mean", "train_rnmse_std",
                    "test_rnmse_mean", "test_rnmse_std"};
    for (const ProtocolResult& r : in.results) {
        const MeanStd& tr = r.report.at(Metric::Rnmse, Split::Train);
        const MeanStd& te = r.report.at(Metric::Rnmse, Split::Test);
        curve.rows.push_back({std::string(to_string(r.family)), std::to_string(r.hyper.size),
                              sigma_text(r), format_double(tr.mean), format_double(tr.std),
                              format_double(te.mean), format_double(te.std)});
    }
    emit("curve.csv", curve);

    Json doc;
    doc["provenance"] = provenance_json(provenance);
    Json results = Json::array();
    for (const ProtocolResult& r : in.results) {
        Json j = report_to_json(r.report);
        j["family"] = std::string(to_string(r.family));
        j["n"] = r.hyper.size;
        j["sigma_w"] = r.family == ModelFamily::Esn ? Json(r.hyper.sigma_w) : Json(nullptr);
        Json runs = Json::array();
        for (const RunRecord& rec : r.runs) {
            runs.push_back(Json{{"series_index", rec.series_index},
                                {"instance_index", rec.instance_index},
                                {"series_seed", rec.series_seed},
                                {"model_seed", rec.model_seed},
                                {"iterations", rec.meta.iterations},
                                {"converged", rec.meta.converged},
                                {"failure", rec.failure ? Json(*rec.failure) : Json(nullptr)}});
        }
        j["run_records"] = std::move(runs);
        results.push_back(std::move(j));
    }
    doc["results"] = std::move(results);

    if (in.surface) {
        emit("surface.csv", surface_table(*in.surface));
        emit("surface_curve.csv", curve_table(*in.surface));
    }
    if (in.equivalence) {
        CsvTable fig;
        fig.comments = {"task=" + std::string(to_string(in.equivalence->task))};
        fig.header = {"reference_n", "matched_size"};
        for (const EquivalencePoint& p : in.equivalence->points) {
            fig.rows.push_back(
                {format_double(p.reference_size),
                 format_double(p.matched_size.value_or(std::numeric_limits<double>::quiet_NaN()))});
        }
        emit("fig4.csv", fig);
        emit("equivalence.csv", equivalence_table(*in.equivalence));
    }
    doc["warnings"] = out.warnings;

    const auto json_path = dir / "report.json";
    std::ofstream(json_path) << doc.dump(2) << '\n';
    out.written.push_back(json_path);
    return out;
}

} // namespace resbench
