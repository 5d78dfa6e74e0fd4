use std::io::IsTerminal;

fn main() {
    let stdout = std::io::stdout();
    let tty = stdout.is_terminal();
    let code = bs_decomp::cli::run(
        std::env::args_os(),
        &mut std::io::stdin().lock(),
        &mut stdout.lock(),
        &mut std::io::stderr(),
        tty,
    );
    std::process::exit(code);
}
