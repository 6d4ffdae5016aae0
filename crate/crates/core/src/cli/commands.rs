use rayon::prelude::*;
use serde::Serialize;

use super::io::{load_input, load_quasirep, parse_map, parse_word_list, write_csv, write_data, write_report, Input};
use super::{Cli, Command, GenCommand, InvariantArgs, InvariantKind, RunConfig, VerifyCommand};
use crate::bott::{k_invariant, IndexReport};
use crate::error::{Error, Result};
use crate::experiments::{
    exel_loring_case, representative_independence, stability_case, StabilityCase, StabilityOutcome, SweepRow,
};
use crate::families::{direct_sum, perturb, pullback, voiculescu_quasirep, PerturbationSpec};
use crate::invariants::{exel_gap_profile, exel_homotopy_gap, kappa, winding_number_det_segment};
use crate::matcore::Unitary;
use crate::words::{mult_defect, parse_word, relator_defect, FreeWord, MultDefect, QuasiRep};

pub fn dispatch(cli: &Cli, config: &RunConfig) -> Result<i32> {
    let tol = &config.tolerances;
    match &cli.command {
        Command::Gen(g) => {
            let qr = generate(g, config)?;
            write_data(config, &qr)?;
            Ok(0)
        }
        Command::Invariant(args) => invariant(args, config),
        Command::Defect { input, set } => {
            let qr = load_quasirep(input, tol)?;
            let set = match set {
                Some(s) => parse_word_list(s)?,
                None => generators_and_inverses(&qr),
            };
            let report = DefectReport {
                set: set.iter().map(ToString::to_string).collect(),
                relator_defect: relator_defect(&qr)?,
                mult_defect: mult_defect(&qr, &set)?,
                dim: qr.dim(),
            };
            write_report(config, &report)?;
            Ok(0)
        }
        Command::Verify(VerifyCommand::ExelLoring { n, n_range }) => {
            let ns = match (n, n_range) {
                (Some(n), _) => vec![*n],
                (None, Some(r)) => parse_range(r)?,
                (None, None) => unreachable!("clap requires one of --n, --n-range"),
            };
            exel_loring_sweep(&ns, cli.global.csv.as_deref(), config)
        }
        Command::Verify(VerifyCommand::RepresentativeIndependence { n, conjugator }) => {
            let qr = voiculescu_quasirep(*n)?;
            let report = representative_independence(&qr, conjugator, tol)?;
            write_report(config, &report)?;
            Ok(if report.identical { 0 } else { 2 })
        }
        Command::Stability {
            g,
            n,
            radius,
            seeds,
            probe,
        } => {
            let cases: Vec<StabilityCase> = (0..*seeds)
                .map(|i| StabilityCase {
                    n: *n,
                    g: *g,
                    seed: config.seed.wrapping_add(i),
                    radius: *radius,
                    probe: *probe,
                })
                .collect();
            let outcomes: Vec<StabilityOutcome> = cases.par_iter().map(|c| stability_case(c, tol)).collect();
            let rows: Vec<SweepRow> = outcomes.iter().map(|o| o.row.clone()).collect();
            if let Some(path) = &cli.global.csv {
                write_csv(path, &rows)?;
            }
            write_report(config, &SweepReport { cases: outcomes.len(), rows: &rows, details: &outcomes })?;
            Ok(outcomes.iter().map(|o| o.exit_code).max().unwrap_or(0))
        }
        Command::HomotopyGap { input, word, samples } => {
            let (w, word) = target_unitary(input, word.as_deref(), config)?;
            let gap = exel_homotopy_gap(&w, tol)?;
            if let Some(path) = &cli.global.csv {
                let profile: Vec<GapSample> = exel_gap_profile(&w, *samples, tol)?
                    .into_iter()
                    .map(|(t, gap)| GapSample { t, gap })
                    .collect();
                write_csv(path, &profile)?;
            }
            let report = GapReport {
                word,
                dim: w.dim(),
                gap,
                below_one: gap < 1.0,
                norm_w_minus_1: w.matrix().distance_to_identity(),
            };
            write_report(config, &report)?;
            Ok(0)
        }
    }
}

fn generate(g: &GenCommand, config: &RunConfig) -> Result<QuasiRep> {
    let tol = &config.tolerances;
    match g {
        GenCommand::Voiculescu { n } => voiculescu_quasirep(*n),
        GenCommand::Perturbed { input, radius, targets } => {
            let qr = load_quasirep(input, tol)?;
            let targets = targets
                .as_deref()
                .map(|t| t.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
                .unwrap_or_default();
            let spec = PerturbationSpec {
                radius: *radius,
                seed: config.seed,
                targets,
            };
            perturb(&qr, &spec, tol)
        }
        GenCommand::Pullback { input, map } => pullback(&load_quasirep(input, tol)?, &parse_map(map)?),
        GenCommand::DirectSum { input, with } => direct_sum(&load_quasirep(input, tol)?, &load_quasirep(with, tol)?),
    }
}

fn generators_and_inverses(qr: &QuasiRep) -> Vec<FreeWord> {
    qr.presentation()
        .generators
        .iter()
        .flat_map(|g| [FreeWord::generator(g), FreeWord::generator(g).inverse()])
        .collect()
}

/// The unitary an invariant is computed on: the matrix itself, or the
/// letter-by-letter image of a word (default: the first relator).
fn target_unitary(input: &std::path::Path, word: Option<&str>, config: &RunConfig) -> Result<(Unitary, Option<String>)> {
    match load_input(input, &config.tolerances)? {
        Input::Matrix(m) => match word {
            None => Ok((m, None)),
            Some(_) => Err(Error::InvalidArgument("--word needs a quasi-representation input".into())),
        },
        Input::QuasiRep(qr) => {
            let w = match word {
                Some(text) => parse_word(text)?,
                None => qr
                    .presentation()
                    .relators
                    .first()
                    .cloned()
                    .ok_or_else(|| Error::InvalidArgument("no --word and the presentation has no relator".into()))?,
            };
            qr.presentation().check_words([&w])?;
            Ok((qr.evaluate(&w)?, Some(w.to_string())))
        }
    }
}

fn invariant(args: &InvariantArgs, config: &RunConfig) -> Result<i32> {
    let tol = &config.tolerances;
    let report = match args.kind {
        InvariantKind::Kappa => {
            let (w, word) = target_unitary(&args.input, args.word.as_deref(), config)?;
            WordReport {
                word,
                invariant: kappa(&w, config.trace, tol)?,
            }
        }
        InvariantKind::Winding => {
            let (w, word) = target_unitary(&args.input, args.word.as_deref(), config)?;
            WordReport {
                word,
                invariant: winding_number_det_segment(&w, tol)?,
            }
        }
        InvariantKind::K => {
            let (u, v, word) = match load_input(&args.input, tol)? {
                Input::QuasiRep(qr) => {
                    let (wu, wv) = (parse_word(&args.u)?, parse_word(&args.v)?);
                    qr.presentation().check_words([&wu, &wv])?;
                    let label = format!("({wu}, {wv})");
                    (qr.evaluate(&wu)?, qr.evaluate(&wv)?, Some(label))
                }
                Input::Matrix(u) => {
                    let path = args
                        .with
                        .as_ref()
                        .ok_or_else(|| Error::InvalidArgument("k on a matrix input needs --with <v matrix>".into()))?;
                    match load_input(path, tol)? {
                        Input::Matrix(v) => (u, v, None),
                        Input::QuasiRep(_) => {
                            return Err(Error::InvalidArgument("--with must hold a matrix".into()))
                        }
                    }
                }
            };
            WordReport {
                word,
                invariant: k_invariant(&u, &v, tol)?,
            }
        }
    };
    write_report(config, &report)?;
    Ok(0)
}

fn exel_loring_sweep(ns: &[usize], csv: Option<&std::path::Path>, config: &RunConfig) -> Result<i32> {
    let tol = &config.tolerances;
    let results: Vec<Result<IndexReport>> = ns.par_iter().map(|&n| exel_loring_case(n, tol)).collect();
    let rows: Vec<SweepRow> = ns
        .iter()
        .zip(&results)
        .map(|(&n, r)| SweepRow::from_index(n, config.seed, r))
        .collect();
    if let Some(path) = csv {
        write_csv(path, &rows)?;
    }
    let code = results
        .iter()
        .map(|r| match r {
            Ok(rep) if rep.equal => 0,
            Ok(_) => 2,
            Err(e) => e.exit_code(),
        })
        .max()
        .unwrap_or(0);
    let details: Vec<IndexEntry> = ns
        .iter()
        .zip(results)
        .map(|(&n, r)| match r {
            Ok(report) => IndexEntry { n, report: Some(report), error: None },
            Err(e) => IndexEntry { n, report: None, error: Some(e.to_string()) },
        })
        .collect();
    if let [single] = details.as_slice() {
        if let Some(report) = &single.report {
            write_report(config, report)?;
            return Ok(code);
        }
        if let Some(e) = &single.error {
            eprintln!("error: {e}");
        }
    }
    write_report(config, &SweepReport { cases: rows.len(), rows: &rows, details: &details })?;
    Ok(code)
}

fn parse_range(r: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("expected a:b:step, got `{r}`"));
    let parts: Vec<usize> = r
        .split(':')
        .map(|p| p.trim().parse().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    match parts.as_slice() {
        [a, b, step] if *step > 0 && a <= b => Ok((*a..=*b).step_by(*step).collect()),
        [a, b] if a <= b => Ok((*a..=*b).collect()),
        _ => Err(bad()),
    }
}

#[derive(Serialize)]
struct WordReport {
    word: Option<String>,
    #[serde(flatten)]
    invariant: crate::invariants::InvariantReport,
}

#[derive(Serialize)]
struct DefectReport {
    dim: usize,
    set: Vec<String>,
    relator_defect: f64,
    mult_defect: MultDefect,
}

#[derive(Serialize)]
struct GapReport {
    word: Option<String>,
    dim: usize,
    gap: f64,
    below_one: bool,
    norm_w_minus_1: f64,
}

#[derive(Serialize)]
struct GapSample {
    t: f64,
    gap: f64,
}

#[derive(Serialize)]
struct IndexEntry {
    n: usize,
    report: Option<IndexReport>,
    error: Option<String>,
}

#[derive(Serialize)]
struct SweepReport<'a, T: Serialize> {
    cases: usize,
    rows: &'a [SweepRow],
    details: &'a [T],
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("16:64:16").unwrap(), vec![16, 32, 48, 64]);
        assert_eq!(parse_range("3:5").unwrap(), vec![3, 4, 5]);
        assert!(parse_range("5:3:1").is_err());
        assert!(parse_range("1:4:0").is_err());
        assert!(parse_range("x").is_err());
    }
}
