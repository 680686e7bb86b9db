fn main() {
    let result = effect_workbench::cli::run_command(std::env::args_os());
    if result.exit == 2 {
        eprint!("{}", result.report);
    } else {
        print!("{}", result.report);
    }
    std::process::exit(result.exit);
}
