import typer

from core.config import settings
from core.logging_config import configure_logging

# ------------ single Typer instantiation ------------

app = typer.Typer(
    name="socm",
    help="Exact SOCM invariants of the A8, D8 and E8 Coxeter elements and their analyses.",
    add_completion=False,
    no_args_is_help=True,
    pretty_exceptions_enable=False,
)


@app.callback()
def root(
    log_level: str = typer.Option(settings.socm_log_level, "--log-level", help="Logging level (default: SOCM_LOG_LEVEL)."),
):
    configure_logging(log_level)


# ------------ include your commands ------------
from cli import freq, graphs, pca, saliency, sweep, train

app.command("sweep")(sweep.cmd_sweep)
app.command("freq")(freq.cmd_freq)
app.command("graphs")(graphs.cmd_graphs)
app.command("pca")(pca.cmd_pca)
app.command("train")(train.cmd_train)
app.command("saliency")(saliency.cmd_saliency)

# ------------ run ------------
if __name__ == "__main__":
    app()
