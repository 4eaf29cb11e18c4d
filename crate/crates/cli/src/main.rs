use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spectherm_cli::{execute, load_config, CliResult, Command, Overrides};

#[derive(Parser)]
#[command(name = "spectherm", version, about = "Spectral-Galerkin battery thermal experiments")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Output error of each model order against the finite-difference oracle.
    Validate(CommonArgs),
    /// Reduced models and the equivalent circuit against the oracle, with timings.
    CompareTec(CommonArgs),
    /// Thermal merits of the five cooling scenarios.
    Scenarios(CommonArgs),
    /// Closed-loop mean-temperature control across C-rates.
    Control(CommonArgs),
    /// Constant-volume sweep over height-to-radius ratios.
    SweepGeometry(CommonArgs),
    /// Forward simulation of each configured order.
    Simulate(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated model orders, e.g. 1,4,9.
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<usize>>,
}

fn dispatch(cli: Cli) -> CliResult<PathBuf> {
    let (command, args) = match cli.command {
        Cmd::Validate(a) => (Command::Validate, a),
        Cmd::CompareTec(a) => (Command::CompareTec, a),
        Cmd::Scenarios(a) => (Command::Scenarios, a),
        Cmd::Control(a) => (Command::Control, a),
        Cmd::SweepGeometry(a) => (Command::SweepGeometry, a),
        Cmd::Simulate(a) => (Command::Simulate, a),
    };
    let mut cfg = load_config(&args.config)?;
    Overrides { out: args.out, seed: args.seed, orders: args.orders }.apply(&mut cfg)?;
    execute(command, &cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(dir) => {
            println!("{}", dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use std::path::Path;

    use super::*;

    fn call(args: &[&str], config: &Path, out: &Path) -> CliResult<PathBuf> {
        let mut argv = vec!["spectherm".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        argv.extend(["--config".into(), config.display().to_string(), "--out".into(), out.display().to_string()]);
        dispatch(Cli::try_parse_from(argv).unwrap())
    }

    fn code(r: CliResult<PathBuf>) -> i32 {
        r.map(|_| 0).unwrap_or_else(|e| e.exit_code())
    }

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    const SMALL: &str = r#"{
  "schema_version": 1,
  "orders": [1, 4],
  "horizon": 20.0,
  "metrics": {"grid": [11, 11], "stride": 5},
  "fd": {"n_r": 16, "n_z": 16, "dt": 0.5}
}"#;

    #[test]
    fn unknown_key_is_a_config_error_with_line() {
        let d = tempfile::tempdir().unwrap();
        let cfg = write(d.path(), "c.json", "{\n  \"schema_version\": 1,\n  \"horizn\": 5\n}\n");
        let e = call(&["simulate"], &cfg, d.path()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("c.json:3"), "{e}");
    }

    #[test]
    fn empty_orders_is_a_config_error() {
        let d = tempfile::tempdir().unwrap();
        let cfg = write(d.path(), "c.json", r#"{"schema_version": 1, "orders": []}"#);
        assert_eq!(code(call(&["validate"], &cfg, d.path())), 2);
    }

    #[test]
    fn pouch_only_simulates() {
        let d = tempfile::tempdir().unwrap();
        let cfg = write(
            d.path(),
            "c.json",
            r#"{"schema_version": 1, "orders": [1], "horizon": 5.0,
                "cell": {"geometry": {"shape": "pouch", "width": 0.01}, "length": 0.2, "density": 2118.0,
                         "heat_capacity": 795.0, "k_radial": 0.67, "k_axial": 66.6}}"#,
        );
        for cmd in ["compare-tec", "scenarios", "sweep-geometry"] {
            assert_eq!(code(call(&[cmd], &cfg, d.path())), 4, "{cmd}");
        }
        assert_eq!(code(call(&["simulate"], &cfg, d.path())), 0);
    }

    #[test]
    fn flags_override_config() {
        let d = tempfile::tempdir().unwrap();
        let cfg = write(d.path(), "c.json", SMALL);
        call(&["simulate", "--orders", "9", "--seed", "3"], &cfg, d.path()).unwrap();
        assert!(d.path().join("simulate/O9.csv").exists());
        assert!(!d.path().join("simulate/O1.csv").exists());
        let text = std::fs::read_to_string(d.path().join("simulate/summary.json")).unwrap();
        let summary: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(summary["seed"], 3);
        assert_eq!(summary["config_sha256"].as_str().unwrap().len(), 64);
        assert_eq!(code(call(&["simulate", "--orders", "2"], &cfg, d.path())), 2);
    }

    #[test]
    fn csv_headers_carry_units_and_rows_follow_records() {
        let d = tempfile::tempdir().unwrap();
        let cfg = write(d.path(), "c.json", SMALL);
        call(&["simulate"], &cfg, d.path()).unwrap();
        let text = std::fs::read_to_string(d.path().join("simulate/O4.csv")).unwrap();
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().unwrap().split(',').collect();
        let units = ["_s", "_C", "_K", "_Kpm"];
        assert!(header.iter().all(|h| units.iter().any(|u| h.ends_with(u))), "{header:?}");
        // Steps 0, 5, 10, 15 and 20.
        assert_eq!(lines.count(), 5);
    }

    #[test]
    fn drive_cycle_profiles_resolve_next_to_the_config() {
        let d = tempfile::tempdir().unwrap();
        write(d.path(), "cycle.csv", "t_s,I_A,V_V,Vocv_V\n0,45,3.5,3.3\n10,0,3.3,3.3\n");
        let cfg = write(
            d.path(),
            "c.json",
            r#"{"schema_version": 1, "orders": [1], "horizon": 20.0, "profile": {"kind": "file", "path": "cycle.csv"}}"#,
        );
        call(&["simulate"], &cfg, &d.path().join("out")).unwrap();
        let bad = write(d.path(), "bad.json", r#"{"schema_version": 1, "profile": {"kind": "file", "path": "missing.csv"}}"#);
        assert_eq!(code(call(&["simulate"], &bad, d.path())), 2);
    }
}
