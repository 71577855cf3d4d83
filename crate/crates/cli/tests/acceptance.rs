//! Acceptance: repeated CLI runs with identical inputs and seed produce
//! byte-identical stdout and output files.

use std::path::Path;
use std::process::{Command, Output};

fn qld(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qld"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|_| panic!("output file {name} exists"))
}

#[test]
fn criterion_11_cli_determinism() {
    let work = tempfile::tempdir().unwrap();
    let dir = work.path();

    // Inputs shared by both passes.
    let setup = qld(
        &[
            "encode",
            "--kind",
            "concat",
            "--q",
            "2",
            "--m",
            "2",
            "--theta",
            "1/2",
            "--message",
            "1 0 1 1",
            "--plant",
            "0.96",
            "--out",
            "table_concat.txt",
        ],
        dir,
    );
    assert!(setup.status.success(), "{setup:?}");

    let mut passes: Vec<Vec<(String, Vec<u8>)>> = Vec::new();
    for pass in 0..2 {
        let tag = format!("p{pass}");
        let mut artifacts: Vec<(String, Vec<u8>)> = Vec::new();

        let o = qld(
            &[
                "encode",
                "--kind",
                "grs",
                "--q",
                "5",
                "--n",
                "2",
                "--message",
                "1 2",
                "--plant",
                "0.9",
                "--out",
                &format!("{tag}_table.txt"),
            ],
            dir,
        );
        assert!(o.status.success());
        artifacts.push(("encode.stdout".into(), o.stdout));
        artifacts.push(("table".into(), read(dir, &format!("{tag}_table.txt"))));

        let o = qld(
            &[
                "decode-grs",
                "--table",
                &format!("{tag}_table.txt"),
                "--q",
                "5",
                "--n",
                "2",
                "--eps",
                "0.65",
                "--eps-inner",
                "0.25",
                "--seed",
                "41",
                "--list-out",
                &format!("{tag}_list.txt"),
                "--report-out",
                &format!("{tag}_report.tsv"),
            ],
            dir,
        );
        assert!(o.status.success());
        artifacts.push(("decode.stdout".into(), o.stdout));
        artifacts.push(("list".into(), read(dir, &format!("{tag}_list.txt"))));
        artifacts.push(("report".into(), read(dir, &format!("{tag}_report.tsv"))));

        let o = qld(
            &[
                "decode-grs",
                "--plant",
                "0.95",
                "--message",
                "1 2",
                "--q",
                "5",
                "--n",
                "2",
                "--eps",
                "0.7",
                "--eps-inner",
                "0.25",
                "--seed",
                "77",
                "--trials",
                "40",
                "--jobs",
                "4",
                "--report-out",
                &format!("{tag}_trials.tsv"),
            ],
            dir,
        );
        assert!(o.status.success());
        artifacts.push(("trials.stdout".into(), o.stdout));
        artifacts.push(("trials".into(), read(dir, &format!("{tag}_trials.tsv"))));

        let o = qld(
            &[
                "decode-concat",
                "--table",
                "table_concat.txt",
                "--q",
                "2",
                "--m",
                "2",
                "--theta",
                "1/2",
                "--eps",
                "0.45",
                "--eps-outer",
                "0.65",
                "--seed",
                "13",
                "--list-out",
                &format!("{tag}_clist.txt"),
            ],
            dir,
        );
        assert!(o.status.success());
        artifacts.push(("concat.stdout".into(), o.stdout));
        artifacts.push(("clist".into(), read(dir, &format!("{tag}_clist.txt"))));

        let o = qld(
            &[
                "reduce",
                "--peel",
                "--input",
                "table_concat.txt",
                "--output",
                &format!("{tag}_outer.txt"),
            ],
            dir,
        );
        assert!(o.status.success());
        artifacts.push(("outer".into(), read(dir, &format!("{tag}_outer.txt"))));

        let o = qld(
            &[
                "npip", "--q", "11", "--n", "8", "--m", "2", "--degree", "1", "--seed", "5",
            ],
            dir,
        );
        assert!(o.status.success());
        artifacts.push(("npip.stdout".into(), o.stdout));

        let o = qld(
            &[
                "cip",
                "--q",
                "11",
                "--degree",
                "1",
                "--agreement",
                "3",
                "--plant-locators",
                "5",
                "--seed",
                "9",
            ],
            dir,
        );
        assert!(o.status.success());
        artifacts.push(("cip.stdout".into(), o.stdout));

        let o = qld(
            &[
                "bdvp",
                "--table",
                &format!("{tag}_table.txt"),
                "--n",
                "2",
                "--eps",
                "0.3",
                "--solve",
                "--map",
                "--dump",
                &format!("{tag}_inst.txt"),
            ],
            dir,
        );
        assert!(o.status.success());
        artifacts.push(("bdvp.stdout".into(), o.stdout));
        artifacts.push(("inst".into(), read(dir, &format!("{tag}_inst.txt"))));

        passes.push(artifacts);
    }

    let [first, second] = passes.try_into().expect("two passes");
    assert_eq!(first.len(), second.len());
    for ((name_a, bytes_a), (name_b, bytes_b)) in first.iter().zip(second.iter()) {
        assert_eq!(name_a, name_b);
        assert_eq!(
            bytes_a, bytes_b,
            "artifact {name_a} differs between identical runs"
        );
    }
    println!(
        "criterion 11 cli-determinism: PASS ({} artifacts byte-identical across two runs)",
        first.len()
    );
}
