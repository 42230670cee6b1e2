//! `zedge`: command-line front end for the zero-error capacity toolkit.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use num_traits::Zero;
use serde_json::{json, Value};
use zedge::exact::{format_rational, log2_approx};
use zedge::games::{
    build_channel_game, classical_perfect_exists, is_perfect, win_probability, Game, GameFile,
    Strategy, StrategyFile,
};
use zedge::graph::{maximal_cliques, Graph};
use zedge::ks::{build_loop_channel, parse_ks};
use zedge::ns::{parse_box, NsVerdict};
use zedge::packing::{clique_hypergraph, FeedbackCapacity};
use zedge::se::CertificateFile;
use zedge::{
    best_graph_ns_bound, build_ks_certificate, build_ks_channel, check_certificate,
    compose_box_channel, example_box, example_channel, ks_verify, max_independent_set,
    min_error_code, ns_capacity, ns_zero_error_check, parse_channel, peres_basis_set, sim_cost,
    simulate_protocol, verify_ns, Channel, KsBasisSet, Rational, SeCertificate, Verdict,
};

#[derive(Parser)]
#[command(
    name = "zedge",
    version,
    about = "Exact one-shot zero-error capacities of classical channels"
)]
struct Cli {
    /// Emit machine-readable JSON (rationals as strings).
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads; defaults to the number of cores. Results do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full report: c0, α*, c_NS, simulation cost and an optional SE certificate.
    Analyze {
        channel: PathBuf,
        #[arg(long, value_name = "FILE")]
        certificate: Option<PathBuf>,
        /// Write the confusability graph in DOT format.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// One-shot unassisted zero-error message count.
    C0 {
        channel: PathBuf,
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Non-signalling assisted capacity from the packing LP.
    Cns {
        channel: PathBuf,
        /// Print the covering certificate.
        #[arg(long)]
        dual: bool,
    },
    /// Cost of simulating the channel with non-signalling assistance.
    Simcost { channel: PathBuf },
    /// Maximal cliques of the confusability graph.
    Cliques {
        channel: PathBuf,
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Tensor product of two channels.
    Tensor {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Decide whether a basis set admits no transversal (Kochen-Specker property).
    KsVerify { ks: PathBuf },
    /// Channel whose inputs are the rays of a basis set.
    KsChannel {
        ks: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
        /// Use a clique decomposition with this many cliques per ray instead of
        /// one output per orthogonal pair.
        #[arg(long, value_name = "K")]
        loops: Option<usize>,
        /// Also write the maximally entangled certificate.
        #[arg(long, value_name = "FILE")]
        certificate: Option<PathBuf>,
    },
    /// The 24-ray basis set in dimension 4.
    Peres {
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Check an entanglement-assisted certificate against a channel.
    Certify {
        channel: PathBuf,
        certificate: PathBuf,
    },
    /// Monte Carlo run of the entanglement-assisted protocol.
    KsProtocol {
        ks: PathBuf,
        /// Channel to run over; defaults to the pair-construction channel.
        #[arg(long, value_name = "FILE")]
        channel: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the non-signalling constraints of a box.
    NsVerify {
        #[arg(value_name = "BOX")]
        boxfile: PathBuf,
    },
    /// Channel obtained by wiring a box around a channel.
    NsCompose {
        #[arg(value_name = "BOX")]
        boxfile: PathBuf,
        channel: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// The one-bit non-signalling example, end to end.
    NsDemo,
    /// Channel-coding game for a message count.
    GameBuild {
        channel: PathBuf,
        #[arg(long)]
        msgs: usize,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Winning probability of a strategy.
    GameEval { game: PathBuf, strategy: PathBuf },
    /// Smallest average error over codes with a given number of messages.
    MinError {
        channel: PathBuf,
        #[arg(long)]
        msgs: usize,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("zedge: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("zedge: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// A verifier answering "no" exits 1 like a domain error, after printing its report.
enum Status {
    Ok,
    Negative,
}

fn r(x: &Rational) -> String {
    format_rational(x)
}

fn bits(x: &Rational) -> String {
    if x.is_zero() {
        "-inf".into()
    } else {
        format!("≈ {:.6} bits", log2_approx(x))
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_channel(path: &Path) -> Result<Channel> {
    parse_channel(&read(path)?).with_context(|| format!("in channel file {}", path.display()))
}

fn read_ks(path: &Path) -> Result<KsBasisSet> {
    parse_ks(&read(path)?).with_context(|| format!("in basis-set file {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_json<T: serde::Serialize>(path: &Path, v: &T) -> Result<()> {
    write(path, &(serde_json::to_string_pretty(v)? + "\n"))
}

fn emit(cli: &Cli, v: Value, text: impl FnOnce() -> String) {
    if cli.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&v).expect("values serialize")
        );
    } else {
        print!("{}", text());
    }
}

fn labels(g: &Graph, set: &[usize]) -> Vec<String> {
    set.iter().map(|&v| g.labels()[v].clone()).collect()
}

fn export_dot(path: &Option<PathBuf>, g: &Graph) -> Result<()> {
    match path {
        Some(p) => write(p, &g.to_dot("confusability")),
        None => Ok(()),
    }
}

fn run(cli: &Cli) -> Result<Status> {
    match &cli.cmd {
        Cmd::Analyze {
            channel,
            certificate,
            dot,
        } => analyze(cli, channel, certificate.as_deref(), dot),
        Cmd::C0 { channel, dot } => {
            let n = read_channel(channel)?;
            let g = n.confusability_graph();
            export_dot(dot, &g)?;
            let res = max_independent_set(&g);
            let w = labels(&g, &res.witness);
            emit(
                cli,
                json!({"c0": res.size, "witness": w, "nodes": res.node_count}),
                || format!("{}\nwitness: {{{}}}\n", res.size, w.join(", ")),
            );
            Ok(Status::Ok)
        }
        Cmd::Cns { channel, dual } => cns(cli, channel, *dual),
        Cmd::Simcost { channel } => {
            let s = sim_cost(&read_channel(channel)?);
            emit(
                cli,
                json!({"cost_arg": r(&s.cost_arg), "k_ns": s.k_ns.to_string()}),
                || {
                    format!(
                        "cost_arg = {}\nk_NS = {}\nK_NS = log2 {} {}\n",
                        r(&s.cost_arg),
                        s.k_ns,
                        r(&s.cost_arg),
                        bits(&s.cost_arg)
                    )
                },
            );
            Ok(Status::Ok)
        }
        Cmd::Cliques { channel, dot } => {
            let n = read_channel(channel)?;
            let g = n.confusability_graph();
            export_dot(dot, &g)?;
            let cl: Vec<Vec<String>> = maximal_cliques(&g).iter().map(|c| labels(&g, c)).collect();
            emit(cli, json!({"cliques": cl}), || {
                cl.iter()
                    .map(|c| format!("{{{}}}\n", c.join(", ")))
                    .collect()
            });
            Ok(Status::Ok)
        }
        Cmd::Tensor { a, b, output } => {
            let t = read_channel(a)?.tensor(&read_channel(b)?);
            match output {
                Some(p) => {
                    write_json(p, &t.to_file())?;
                    emit(
                        cli,
                        json!({"inputs": t.inputs().len(), "outputs": t.outputs().len()}),
                        || {
                            format!(
                                "wrote {} ({} inputs, {} outputs)\n",
                                p.display(),
                                t.inputs().len(),
                                t.outputs().len()
                            )
                        },
                    );
                }
                None => println!("{}", serde_json::to_string_pretty(&t.to_file())?),
            }
            Ok(Status::Ok)
        }
        Cmd::KsVerify { ks } => {
            let z = read_ks(ks)?;
            let rep = ks_verify(&z);
            let w = rep.witness.as_ref().map(|w| {
                w.iter()
                    .enumerate()
                    .map(|(m, &j)| z.ray_label(m * z.dimension() + j))
                    .collect::<Vec<_>>()
            });
            emit(
                cli,
                json!({"ks": !rep.exists, "transversal": w, "nodes": rep.nodes, "bases": z.num_bases(), "dimension": z.dimension()}),
                || match &w {
                    None => format!(
                        "KS set: no transversal among {} bases of dimension {} ({} nodes)\n",
                        z.num_bases(),
                        z.dimension(),
                        rep.nodes
                    ),
                    Some(w) => format!("not a KS set: transversal {}\n", w.join(" ")),
                },
            );
            Ok(Status::Ok)
        }
        Cmd::KsChannel {
            ks,
            output,
            loops,
            certificate,
        } => {
            let z = read_ks(ks)?;
            let n = match loops {
                Some(k) => build_loop_channel(&z, *k)
                    .with_context(|| format!("no clique decomposition with {k} cliques per ray"))?,
                None => build_ks_channel(&z)?,
            };
            write_json(output, &n.to_file())?;
            if let Some(c) = certificate {
                write_json(c, &build_ks_certificate(&z).to_file(&n))?;
            }
            emit(
                cli,
                json!({"inputs": n.inputs().len(), "outputs": n.outputs().len()}),
                || {
                    format!(
                        "wrote {} ({} inputs, {} outputs)\n",
                        output.display(),
                        n.inputs().len(),
                        n.outputs().len()
                    )
                },
            );
            Ok(Status::Ok)
        }
        Cmd::Peres { output } => {
            let z = peres_basis_set()?;
            match output {
                Some(p) => {
                    write_json(p, &z.to_file())?;
                    emit(
                        cli,
                        json!({"rays": z.num_rays(), "bases": z.num_bases()}),
                        || {
                            format!(
                                "wrote {} ({} rays in {} bases)\n",
                                p.display(),
                                z.num_rays(),
                                z.num_bases()
                            )
                        },
                    );
                }
                None => println!("{}", z.to_json()),
            }
            Ok(Status::Ok)
        }
        Cmd::Certify {
            channel,
            certificate,
        } => {
            let n = read_channel(channel)?;
            let (verdict, q) = certify(&n, certificate)?;
            emit(cli, verdict_json(&verdict, q), || match &verdict {
                Verdict::Accept => format!("accept: c_SE ≥ {q}\n"),
                Verdict::Reject(why) => format!("reject: {why}\n"),
            });
            Ok(if verdict.is_accept() {
                Status::Ok
            } else {
                Status::Negative
            })
        }
        Cmd::KsProtocol {
            ks,
            channel,
            trials,
            seed,
        } => {
            let z = read_ks(ks)?;
            let n = match channel {
                Some(p) => read_channel(p)?,
                None => build_ks_channel(&z)?,
            };
            let st = simulate_protocol(&z, &n, *seed, *trials)?;
            emit(
                cli,
                json!({"trials": st.trials, "decode_errors": st.decode_errors, "seed": st.seed, "per_message": st.per_message}),
                || {
                    format!(
                        "trials = {}\nseed = {}\ndecode errors = {}\nper message: {}\n",
                        st.trials,
                        st.seed,
                        st.decode_errors,
                        st.per_message
                            .iter()
                            .map(u64::to_string)
                            .collect::<Vec<_>>()
                            .join(" ")
                    )
                },
            );
            Ok(if st.decode_errors == 0 {
                Status::Ok
            } else {
                Status::Negative
            })
        }
        Cmd::NsVerify { boxfile } => {
            let p = parse_box(&read(boxfile)?)
                .with_context(|| format!("in box file {}", boxfile.display()))?;
            let v = verify_ns(&p);
            emit(
                cli,
                match &v {
                    NsVerdict::Ok => json!({"non_signalling": true}),
                    NsVerdict::Violation(w) => json!({"non_signalling": false, "violation": w}),
                },
                || match &v {
                    NsVerdict::Ok => "non-signalling\n".into(),
                    NsVerdict::Violation(w) => format!("signalling: {w}\n"),
                },
            );
            Ok(if v.is_ok() {
                Status::Ok
            } else {
                Status::Negative
            })
        }
        Cmd::NsCompose {
            boxfile,
            channel,
            output,
        } => {
            let p = parse_box(&read(boxfile)?)
                .with_context(|| format!("in box file {}", boxfile.display()))?;
            let m = compose_box_channel(&p, &read_channel(channel)?)?;
            match output {
                Some(o) => {
                    write_json(o, &m.to_file())?;
                    emit(
                        cli,
                        json!({"inputs": m.inputs().len(), "outputs": m.outputs().len()}),
                        || format!("wrote {}\n", o.display()),
                    );
                }
                None => println!("{}", serde_json::to_string_pretty(&m.to_file())?),
            }
            Ok(Status::Ok)
        }
        Cmd::NsDemo => ns_demo(cli),
        Cmd::GameBuild {
            channel,
            msgs,
            output,
        } => {
            let n = read_channel(channel)?;
            let g = build_channel_game(&n, *msgs)?;
            write_json(output, &g.to_file())?;
            let classical = classical_perfect_exists(&n, *msgs);
            emit(
                cli,
                json!({"msgs": msgs, "classical_perfect": classical}),
                || {
                    format!(
                        "wrote {}\nclassical perfect strategy: {}\n",
                        output.display(),
                        if classical { "yes" } else { "no" }
                    )
                },
            );
            Ok(Status::Ok)
        }
        Cmd::GameEval { game, strategy } => {
            let gf: GameFile = serde_json::from_str(&read(game)?)
                .with_context(|| format!("in {}", game.display()))?;
            let g = Game::from_file(gf)?;
            let sf: StrategyFile = serde_json::from_str(&read(strategy)?)
                .with_context(|| format!("in {}", strategy.display()))?;
            let s = Strategy::from_file(sf)?;
            let w = win_probability(&g, &s)?;
            let perfect = is_perfect(&g, &s)?;
            emit(
                cli,
                json!({"win_probability": r(&w), "perfect": perfect}),
                || {
                    format!(
                        "win probability = {}\nperfect: {}\n",
                        r(&w),
                        if perfect { "yes" } else { "no" }
                    )
                },
            );
            Ok(Status::Ok)
        }
        Cmd::MinError { channel, msgs } => {
            let n = read_channel(channel)?;
            let res = min_error_code(&n, *msgs)?;
            let code: Vec<&str> = res.code.iter().map(|&x| n.inputs()[x].as_str()).collect();
            emit(cli, json!({"error": r(&res.error), "code": code}), || {
                format!("{}\ncode: {{{}}}\n", r(&res.error), code.join(", "))
            });
            Ok(Status::Ok)
        }
    }
}

fn verdict_json(v: &Verdict, q: usize) -> Value {
    match v {
        Verdict::Accept => json!({"verdict": "accept", "q": q}),
        Verdict::Reject(why) => json!({"verdict": "reject", "q": q, "reason": why}),
    }
}

/// Malformed operator data inside a well-formed file is a rejection, not an error.
fn certify(n: &Channel, path: &Path) -> Result<(Verdict, usize)> {
    let f: CertificateFile = serde_json::from_str(&read(path)?)
        .with_context(|| format!("in certificate file {}", path.display()))?;
    Ok(match SeCertificate::from_file(&f, n) {
        Ok(c) => (check_certificate(n, &c), c.q),
        Err(e) => (Verdict::Reject(e.to_string()), f.q),
    })
}

fn feedback_text(f: &FeedbackCapacity) -> String {
    match f {
        FeedbackCapacity::Zero => "0".into(),
        FeedbackCapacity::LogOf(a) => format!("log2 {} {}", r(a), bits(a)),
    }
}

fn feedback_json(f: &FeedbackCapacity) -> Value {
    match f {
        FeedbackCapacity::Zero => json!({"zero": true}),
        FeedbackCapacity::LogOf(a) => json!({"log_of": r(a)}),
    }
}

fn cns(cli: &Cli, channel: &Path, dual: bool) -> Result<Status> {
    let n = read_channel(channel)?;
    let h = n.hypergraph();
    let rep = ns_capacity(&n)?;
    let cover: Vec<(String, String)> = h
        .edges()
        .iter()
        .zip(&rep.packing.dual_cover)
        .filter(|(_, z)| !z.is_zero())
        .map(|(e, z)| (e.label.clone(), r(z)))
        .collect();
    let mut v = json!({
        "alpha_star": r(&rep.alpha_star),
        "c_ns": rep.c_ns.to_string(),
        "capacity_arg": r(&rep.capacity_arg),
        "feedback": feedback_json(&rep.feedback),
        "weights": n.inputs().iter().zip(&rep.packing.weights).map(|(x, w)| (x.clone(), r(w))).collect::<Vec<_>>(),
    });
    if dual {
        v["dual_cover"] = json!(cover);
        v["box_dual"] = json!(n
            .inputs()
            .iter()
            .zip(&rep.packing.box_dual)
            .filter(|(_, z)| !z.is_zero())
            .map(|(x, z)| (x.clone(), r(z)))
            .collect::<Vec<_>>());
    }
    emit(cli, v, || {
        let mut s = format!(
            "alpha* = {}\nc_NS = {}\nC_NS = log2 {} {}\nC_0F = {}\n",
            r(&rep.alpha_star),
            rep.c_ns,
            r(&rep.capacity_arg),
            bits(&rep.capacity_arg),
            feedback_text(&rep.feedback)
        );
        if dual {
            s.push_str("covering certificate:\n");
            for (e, z) in &cover {
                s.push_str(&format!("  y = {e}: {z}\n"));
            }
            for (x, z) in n.inputs().iter().zip(&rep.packing.box_dual) {
                if !z.is_zero() {
                    s.push_str(&format!("  box {x}: {}\n", r(z)));
                }
            }
        }
        s
    });
    Ok(Status::Ok)
}

fn analyze(
    cli: &Cli,
    path: &Path,
    certificate: Option<&Path>,
    dot: &Option<PathBuf>,
) -> Result<Status> {
    let n = read_channel(path)?;
    let g = n.confusability_graph();
    export_dot(dot, &g)?;
    let mis = max_independent_set(&g);
    let rep = ns_capacity(&n)?;
    let graph_bound = best_graph_ns_bound(&g)?;
    let cliques = clique_hypergraph(&g).edges().len();
    let sc = sim_cost(&n);
    let cert = certificate.map(|p| certify(&n, p)).transpose()?;
    let certified = match &cert {
        Some((Verdict::Accept, q)) => Some(*q),
        _ => None,
    };
    let witness = labels(&g, &mis.witness);
    let weights: Vec<(String, String)> = n
        .inputs()
        .iter()
        .zip(&rep.packing.weights)
        .map(|(x, w)| (x.clone(), r(w)))
        .collect();
    let cover: Vec<(String, String)> = n
        .hypergraph()
        .edges()
        .iter()
        .zip(&rep.packing.dual_cover)
        .filter(|(_, z)| !z.is_zero())
        .map(|(e, z)| (e.label.clone(), r(z)))
        .collect();
    let se_low = certified.map_or(mis.size, |q| q.max(mis.size));
    let sandwich = match certified {
        Some(q) if rep.c_ns == q.into() => {
            format!(
                "c0 ≤ c_SE ≤ c_NS: {} ≤ {q} ≤ c_SE ≤ {} (so c_SE = {q})",
                mis.size, rep.c_ns
            )
        }
        Some(q) => format!("c0 ≤ c_SE ≤ c_NS: {} ≤ {q} ≤ c_SE ≤ {}", mis.size, rep.c_ns),
        None => format!("c0 ≤ c_SE ≤ c_NS: {} ≤ c_SE ≤ {}", mis.size, rep.c_ns),
    };
    let v = json!({
        "channel": {"inputs": n.inputs(), "outputs": n.outputs().len()},
        "graph": {"vertices": g.order(), "edges": g.edges().len(), "maximal_cliques": cliques},
        "c0": mis.size,
        "c0_witness": witness,
        "alpha_star": r(&rep.alpha_star),
        "primal": weights,
        "dual_cover": cover,
        "c_ns": rep.c_ns.to_string(),
        "capacity_arg": r(&rep.capacity_arg),
        "feedback": feedback_json(&rep.feedback),
        "graph_ns_bound": r(&graph_bound),
        "cost_arg": r(&sc.cost_arg),
        "k_ns": sc.k_ns.to_string(),
        "certificate": cert.as_ref().map(|(v, q)| verdict_json(v, *q)),
        "c_se_lower": se_low,
        "sandwich": sandwich,
    });
    emit(cli, v, || {
        let mut s = String::new();
        s.push_str(&format!(
            "channel: {} inputs, {} outputs\n",
            n.inputs().len(),
            n.outputs().len()
        ));
        s.push_str(&format!(
            "confusability graph: {} vertices, {} edges, {} maximal cliques\n",
            g.order(),
            g.edges().len(),
            cliques
        ));
        s.push_str(&format!(
            "c0 = {}  witness {{{}}}\n",
            mis.size,
            witness.join(", ")
        ));
        s.push_str(&format!(
            "alpha* = {}  (log2 {})\n",
            r(&rep.alpha_star),
            bits(&rep.alpha_star)
        ));
        s.push_str(&format!(
            "  primal: {}\n",
            weights
                .iter()
                .map(|(x, w)| format!("{x}={w}"))
                .collect::<Vec<_>>()
                .join(" ")
        ));
        s.push_str(&format!(
            "  dual:   {}\n",
            cover
                .iter()
                .map(|(e, z)| format!("{e}={z}"))
                .collect::<Vec<_>>()
                .join(" ")
        ));
        s.push_str(&format!("c_NS = {}\n", rep.c_ns));
        s.push_str(&format!(
            "C_NS = log2 {} {}\n",
            r(&rep.capacity_arg),
            bits(&rep.capacity_arg)
        ));
        s.push_str(&format!("C_0F = {}\n", feedback_text(&rep.feedback)));
        s.push_str(&format!(
            "graph bound (clique hypergraph) alpha* = {}\n",
            r(&graph_bound)
        ));
        s.push_str(&format!(
            "simulation: cost_arg = {}  k_NS = {}\n",
            r(&sc.cost_arg),
            sc.k_ns
        ));
        match &cert {
            Some((Verdict::Accept, q)) => s.push_str(&format!("certificate: accept, c_SE ≥ {q}\n")),
            Some((Verdict::Reject(why), _)) => {
                s.push_str(&format!("certificate: reject ({why})\n"))
            }
            None => {}
        }
        s.push_str(&sandwich);
        s.push('\n');
        s
    });
    Ok(Status::Ok)
}

fn ns_demo(cli: &Cli) -> Result<Status> {
    let n = example_channel();
    let p = example_box();
    let g = n.confusability_graph();
    let c0 = max_independent_set(&g).size;
    let rep = ns_capacity(&n)?;
    let ns = verify_ns(&p);
    let m = compose_box_channel(&p, &n)?;
    let ok = ns_zero_error_check(&p, &n, 2)?;
    let m_rows: Vec<Vec<String>> = m
        .matrix()
        .iter()
        .map(|row| row.iter().map(r).collect())
        .collect();
    let v = json!({
        "channel": n.to_file(),
        "c0": c0,
        "alpha_star": r(&rep.alpha_star),
        "c_ns": rep.c_ns.to_string(),
        "non_signalling": ns.is_ok(),
        "composed": {"inputs": m.inputs(), "outputs": m.outputs(), "matrix": m_rows},
        "zero_error_two_messages": ok,
    });
    emit(cli, v, || {
        let mut s = String::new();
        s.push_str(
            "channel N: inputs 1..4, outputs the six pairs {i,j}; N({i,j}|x) = 1/3 for x ∈ {i,j}\n",
        );
        for (x, row) in n.matrix().iter().enumerate() {
            s.push_str(&format!(
                "  {}: {}\n",
                n.inputs()[x],
                row.iter().map(r).collect::<Vec<_>>().join(" ")
            ));
        }
        s.push_str(&format!(
            "confusability graph: complete ({} edges), so c0 = {c0}\n",
            g.edges().len()
        ));
        s.push_str(&format!(
            "packing LP: alpha* = {} with weights {}\n",
            r(&rep.alpha_star),
            rep.packing
                .weights
                .iter()
                .map(r)
                .collect::<Vec<_>>()
                .join(" ")
        ));
        s.push_str(&format!("c_NS = floor(alpha*) = {}\n", rep.c_ns));
        s.push_str(&format!(
            "box P(x,y|a,b): Alice a ∈ {{0,1}}, Bob b = an output pair; {}\n",
            if ns.is_ok() {
                "non-signalling"
            } else {
                "SIGNALLING"
            }
        ));
        s.push_str("composed channel M(y|a) = Σ_x Σ_b N(b|x) P(x,y|a,b):\n");
        for (a, row) in m.matrix().iter().enumerate() {
            s.push_str(&format!(
                "  a = {}: {}\n",
                m.inputs()[a],
                m.outputs()
                    .iter()
                    .zip(row)
                    .map(|(y, p)| format!("M({y}|{})={}", m.inputs()[a], r(p)))
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
        }
        s.push_str(&format!(
            "two messages decoded without error: {}\n",
            if ok { "yes" } else { "no" }
        ));
        s.push_str(&format!(
            "one use of N with the box carries one bit; unassisted it carries log2 {c0} bits\n"
        ));
        s
    });
    if !ok {
        bail!("the example box does not give a zero-error bit");
    }
    Ok(Status::Ok)
}
