//! Command-line front end for the exact verification library.
//!
//! Subcommands:
//! - `verify`   — run the full pipeline on a JSON config, emit a report
//! - `recheck`  — re-ingest a previously emitted report and reproduce it
//! - `rtable`   — print one prime's residue-class table with diagnostics
//! - `mu`       — print the multiplicity table for one side of a candidate
//! - `search`   — enumerate admissible prime pairs above the threshold
//! - `selftest` — run the built-in reference checks
//!
//! JSON results go to stdout; human-readable diagnostics go to stderr.
//! Exit codes: 0 = verified / reproduced / all checks pass, 1 = candidate
//! refuted, reproduction failed, or a self-check failed, 2 = usage or input
//! error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use zasscheck_core::{
    build_assembly, build_report, canonical_primitive_poly, chars, degree_census,
    eigenvalue_condition, gauss_sum_check, mu_table, r_table, search_prime_pairs,
    verdict as run_verdict, verify_assembly_character, EpsilonVector, GroupParams, QuadField,
    ReportDocument, Side,
};

/// Candidate description consumed by `verify` and `mu`. Every field below is
/// required: the tool never fills in group parameters silently.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    p: u64,
    q: u64,
    d: u64,
    /// Coefficients `(c1, c0)` of the defining polynomial `X² − c1·X + c0` for `F_{p²}`.
    poly_p: (u64, u64),
    /// Same for `F_{q²}`.
    poly_q: (u64, u64),
    /// Partial augmentations in canonical class order.
    epsilon: Vec<i64>,
    /// Auxiliary prime for the lattice assemblies (optional; defaults to the
    /// smallest odd prime distinct from `p` and `q`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    aux_prime: Option<u64>,
}

#[derive(Parser)]
#[command(
    name = "zasscheck",
    version,
    about = "Exact verification of torsion-unit counterexamples in integral group rings"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify a candidate described by a JSON config file.
    Verify {
        /// Path to the candidate config (see `theorem_a.json` for the format).
        #[arg(long)]
        config: PathBuf,
        /// Override the auxiliary prime used for lattice assemblies.
        #[arg(long)]
        aux: Option<u64>,
        /// Pretty-print the report JSON.
        #[arg(long)]
        pretty: bool,
    },
    /// Re-ingest a report produced by `verify` and reproduce it from scratch.
    Recheck {
        /// Path to a report JSON file.
        report: PathBuf,
    },
    /// Print the residue-class table of one prime with Gauss-sum diagnostics.
    Rtable {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        d: u64,
        /// Defining polynomial coefficients `c1,c0` (defaults to the canonical choice).
        #[arg(long, value_delimiter = ',')]
        poly: Option<Vec<u64>>,
    },
    /// Print the multiplicity table for one side of a candidate.
    Mu {
        #[arg(long)]
        config: PathBuf,
        /// Which side: `p` or `q`.
        #[arg(long)]
        side: String,
    },
    /// Enumerate admissible prime pairs above the corollary threshold.
    Search {
        #[arg(long)]
        d: u64,
        /// Augmentation bound M.
        #[arg(long)]
        m: i64,
        #[arg(long)]
        p_max: u64,
        /// Check the bounded augmentation box for every pair.
        #[arg(long)]
        effective: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write one `p q d M guaranteed` line per pair to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in reference checks.
    Selftest,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Verify { config, aux, pretty } => cmd_verify(&config, aux, pretty),
        Cmd::Recheck { report } => cmd_recheck(&report),
        Cmd::Rtable { prime, d, poly } => cmd_rtable(prime, d, poly),
        Cmd::Mu { config, side } => cmd_mu(&config, &side),
        Cmd::Search { d, m, p_max, effective, seed, out } => {
            cmd_search(d, m, p_max, effective, seed, out)
        }
        Cmd::Selftest => cmd_selftest(),
    }
}

fn load_config(path: &PathBuf) -> Result<(RunConfig, GroupParams, EpsilonVector)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let config: RunConfig =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let params = GroupParams::new(config.p, config.q, config.d, config.poly_p, config.poly_q)
        .context("validating group parameters")?;
    let eps = EpsilonVector::new(config.epsilon.clone(), config.d)
        .context("validating partial augmentations")?;
    Ok((config, params, eps))
}

fn cmd_verify(config_path: &PathBuf, aux: Option<u64>, pretty: bool) -> Result<i32> {
    let (config, params, eps) = load_config(config_path)?;
    let report = build_report(&params, &eps, aux.or(config.aux_prime))
        .context("building verification report")?;
    let verdict = &report.hashed.certificate.verdict;
    if verdict.is_counterexample {
        eprintln!(
            "counterexample verified for (p, q, d) = ({}, {}, {}), epsilon {:?}",
            params.p(),
            params.q(),
            params.d(),
            eps.canonical()
        );
    } else {
        eprintln!(
            "candidate refuted for (p, q, d) = ({}, {}, {}), epsilon {:?}:",
            params.p(),
            params.q(),
            params.d(),
            eps.canonical()
        );
        for failure in &verdict.failures {
            eprintln!("  - {failure}");
        }
    }
    print_json(&report, pretty)?;
    Ok(if verdict.is_counterexample { 0 } else { 1 })
}

fn cmd_recheck(report_path: &PathBuf) -> Result<i32> {
    let text = fs::read_to_string(report_path)
        .with_context(|| format!("reading report {}", report_path.display()))?;
    let doc: ReportDocument =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", report_path.display()))?;

    let stored_hash = doc.section_sha256.clone();
    let integrity = zasscheck_core::report::section_hash(&doc.hashed) == stored_hash;
    if !integrity {
        eprintln!("stored hash does not match the report's own hashed section");
    }

    let echo = &doc.hashed.certificate.params;
    let params = GroupParams::new(echo.p, echo.q, echo.d, echo.poly_p, echo.poly_q)
        .context("rebuilding group parameters from the report")?;
    let eps = EpsilonVector::new(doc.hashed.certificate.epsilon_canonical.clone(), echo.d)
        .context("rebuilding partial augmentations from the report")?;
    let fresh = build_report(&params, &eps, doc.hashed.aux_prime)
        .context("re-running verification")?;

    let reproduced = integrity && fresh.section_sha256 == stored_hash;
    #[derive(Serialize)]
    struct RecheckOutcome {
        reproduced: bool,
        is_counterexample: bool,
        section_sha256: String,
    }
    print_json(
        &RecheckOutcome {
            reproduced,
            is_counterexample: fresh.hashed.certificate.verdict.is_counterexample,
            section_sha256: fresh.section_sha256.clone(),
        },
        true,
    )?;
    if reproduced {
        eprintln!("report reproduced; hashed sections are byte-identical");
        Ok(0)
    } else {
        eprintln!(
            "report NOT reproduced: stored {}, recomputed {}",
            stored_hash, fresh.section_sha256
        );
        Ok(1)
    }
}

fn cmd_rtable(prime: u64, d: u64, poly: Option<Vec<u64>>) -> Result<i32> {
    let (c1, c0) = match poly {
        Some(v) if v.len() == 2 => (v[0], v[1]),
        Some(v) => bail!("--poly expects exactly two coefficients c1,c0, got {}", v.len()),
        None => canonical_primitive_poly(prime).context("choosing a defining polynomial")?,
    };
    let field = QuadField::new(prime, c1, c0).context("building the quadratic field")?;
    if field.unit_group_order() % d != 0 {
        bail!("d = {d} does not divide p^2 - 1 = {}", field.unit_group_order());
    }
    let table = r_table(&field, d, Side::P);
    #[derive(Serialize)]
    struct RtableOutput {
        prime: u64,
        d: u64,
        poly: (u64, u64),
        stored: Vec<u64>,
        display: Vec<u64>,
        gauss: zasscheck_core::GaussSumCheck,
        delta_bound: f64,
        delta_bound_holds: bool,
    }
    print_json(
        &RtableOutput {
            prime,
            d,
            poly: (c1, c0),
            stored: table.stored.clone(),
            display: table.paper_order(),
            gauss: gauss_sum_check(&table),
            delta_bound: zasscheck_core::delta_bound(prime, d),
            delta_bound_holds: zasscheck_core::delta_bound_holds(&table),
        },
        true,
    )?;
    Ok(0)
}

fn cmd_mu(config_path: &PathBuf, side: &str) -> Result<i32> {
    let (_, params, eps) = load_config(config_path)?;
    let side = match side {
        "p" | "P" => Side::P,
        "q" | "Q" => Side::Q,
        other => bail!("side must be 'p' or 'q', got '{other}'"),
    };
    let mu = mu_table(&params, &eps, side).context("computing the multiplicity table")?;
    print_json(&mu, true)?;
    Ok(if mu.all_nonnegative() { 0 } else { 1 })
}

fn cmd_search(
    d: u64,
    m: i64,
    p_max: u64,
    effective: bool,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<i32> {
    let outcome =
        search_prime_pairs(d, m, p_max, effective, seed).context("running the pair search")?;
    if let Some(path) = out {
        let mut file = fs::File::create(&path)
            .with_context(|| format!("creating {}", path.display()))?;
        for pair in &outcome.pairs {
            writeln!(
                file,
                "{} {} {} {} {}",
                pair.p,
                pair.q,
                pair.d,
                pair.m_bound,
                if pair.guaranteed { 1 } else { 0 }
            )?;
            file.flush()?;
        }
        eprintln!("wrote {} pair lines to {}", outcome.pairs.len(), path.display());
    }
    print_json(&outcome, true)?;
    Ok(0)
}

fn cmd_selftest() -> Result<i32> {
    let mut failures = 0usize;
    let mut check = |name: &str, result: std::result::Result<(), String>| match result {
        Ok(()) => eprintln!("ok   {name}"),
        Err(msg) => {
            failures += 1;
            eprintln!("FAIL {name}: {msg}");
        }
    };

    let params = GroupParams::new(7, 19, 3, (1, 3), (1, 2))
        .map_err(|e| anyhow::anyhow!("reference parameters: {e}"))?;
    let eps = EpsilonVector::new(vec![2, -1, 0], 3).unwrap();

    check("r-table p=7", {
        let t = r_table(params.fp(), 3, Side::P);
        if t.stored == [1, 2, 4] && t.paper_order() == [2, 4, 1] {
            Ok(())
        } else {
            Err(format!("got stored {:?}", t.stored))
        }
    });
    check("r-table p=19", {
        let t = r_table(params.fq(), 3, Side::Q);
        if t.stored == [4, 9, 6] && t.paper_order() == [9, 6, 4] {
            Ok(())
        } else {
            Err(format!("got stored {:?}", t.stored))
        }
    });
    check("verdict", {
        match run_verdict(&params, &eps) {
            Ok(cert) if cert.verdict.is_counterexample => {
                if cert.side_p.inequality_rows == [0, 0, 7]
                    && cert.side_q.inequality_rows == [2, 14, 3]
                {
                    Ok(())
                } else {
                    Err("unexpected inequality rows".into())
                }
            }
            Ok(_) => Err("reference candidate not accepted".into()),
            Err(e) => Err(e.to_string()),
        }
    });
    check("mu-tables", {
        (|| {
            let mp = mu_table(&params, &eps, Side::P).map_err(|e| e.to_string())?;
            let mq = mu_table(&params, &eps, Side::Q).map_err(|e| e.to_string())?;
            if mp.entries() == [1, 0, 1, 0, 0, 7] && mq.entries() == [1, 0, 1, 2, 14, 3] {
                Ok(())
            } else {
                Err(format!("got {:?} and {:?}", mp.entries(), mq.entries()))
            }
        })()
    });
    check("lattice assembly", {
        (|| {
            for side in [Side::P, Side::Q] {
                let asm = build_assembly(&params, &eps, side, 3).map_err(|e| e.to_string())?;
                verify_assembly_character(&params, &eps, &asm).map_err(|e| e.to_string())?;
            }
            Ok(())
        })()
    });
    check("character factorization", {
        (|| {
            for side in [Side::P, Side::Q] {
                chars::chi_matches_xi_factorization(&params, &eps, side)
                    .map_err(|e| e.to_string())?
                    .map_err(|m| format!("{m:?}"))?;
            }
            Ok(())
        })()
    });
    check("eigenvalue condition", {
        (|| {
            let out = eigenvalue_condition(&params, &eps).map_err(|e| e.to_string())?;
            if out.holds && out.family_counts == [36, 6, 18, 1] {
                Ok(())
            } else {
                Err(format!("got {:?}", out.family_counts))
            }
        })()
    });
    check("degree census", {
        let census = degree_census(&params);
        if census.min_nonlinear_degree == 48 && census.entries.len() == 4 {
            Ok(())
        } else {
            Err(format!("got {:?}", census.entries))
        }
    });
    check("gauss dichotomy", {
        (|| {
            for (p, expect_identity) in [(7u64, true), (19, true), (163, true), (167, false)] {
                let (c1, c0) = canonical_primitive_poly(p).map_err(|e| e.to_string())?;
                let f = QuadField::new(p, c1, c0).map_err(|e| e.to_string())?;
                let g = gauss_sum_check(&r_table(&f, 3, Side::P));
                if g.identity_holds != expect_identity {
                    return Err(format!("p = {p}: identity_holds = {}", g.identity_holds));
                }
            }
            Ok(())
        })()
    });
    check("pair search", {
        (|| {
            let out = search_prime_pairs(3, 1, 200, false, 0).map_err(|e| e.to_string())?;
            match out.pairs.first() {
                Some(pair) if (pair.p, pair.q) == (163, 167) && !pair.guaranteed => Ok(()),
                other => Err(format!("first pair: {:?}", other.map(|p| (p.p, p.q)))),
            }
        })()
    });

    if failures == 0 {
        eprintln!("all self-checks passed");
        Ok(0)
    } else {
        eprintln!("{failures} self-check(s) failed");
        Ok(1)
    }
}

fn print_json<T: Serialize>(value: &T, pretty: bool) -> Result<()> {
    let text = if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    };
    println!("{text}");
    Ok(())
}
