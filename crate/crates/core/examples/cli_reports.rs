// Driving the command line in-process: per-τ report files and a merge.

use gramgrid::cli::{parse_rows, run_from, Format};
use gramgrid::census::CensusReport;

fn run(args: &[&str]) -> i32 {
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    run_from(std::iter::once("gramgrid").chain(args.iter().copied()), &mut out, &mut err)
}

pub fn run_example() -> gramgrid::Result<()> {
    let dir = std::env::temp_dir().join(format!("gramgrid-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let out = dir.join("g1.csv");
    let code = run(&[
        "good-segments", "--definition", "1", "--T", "1e5", "--U", "40",
        "--tau=-pi,0,pi", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let mut files: Vec<_> = std::fs::read_dir(&dir)?.filter_map(|e| e.ok()).map(|e| e.path()).collect();
    files.sort();
    for f in &files {
        let rows: Vec<CensusReport> = parse_rows(&std::fs::read_to_string(f)?, Format::Csv)?;
        println!("{}: tau {:+.4}, {} good segments", f.display(), rows[0].tau, rows[0].hits);
    }
    println!("exit status for an out-of-range tau: {}", run(&["gram", "--nu", "100", "--tau", "5"]));
    run(&["h1-window", "--T", "1e6", "--epsilon", "0.1", "--format", "json"]);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() -> gramgrid::Result<()> {
    run_example()
}
