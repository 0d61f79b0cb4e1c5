//! Driving the command line in-process.

use std::fs;

use domino_snakes::cli;
use domino_snakes::tilesets::fixtures;

fn main() -> std::io::Result<()> {
    let dir = std::env::temp_dir().join(format!("snakes-example-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    let tiles = dir.join("fig1.tg");
    fs::write(&tiles, fixtures::fig1().to_text())?;
    let cert = dir.join("fig1.cert");
    let (t, c) = (tiles.to_str().unwrap(), cert.to_str().unwrap());

    let code = cli::run(["snakes", "solve", "--problem", "infinite-snake", "--group", "zd:2", "--tileset", t, "--cert", c]);
    println!("solve exited with {code}");
    let code = cli::run(["snakes", "verify", "--cert", c, "--group", "zd:2", "--tileset", t]);
    println!("verify exited with {code}");
    fs::remove_dir_all(&dir)
}
