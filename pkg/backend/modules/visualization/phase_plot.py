"""
Renderização do diagrama de fases em SVG.
"""
import os

import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402

from ..core.utils import get_logger  # noqa: E402

logger = get_logger('plot')

# Ids determinísticos no SVG gerado
matplotlib.rcParams['svg.hashsalt'] = 'loewner-phase-diagram'

# Estilo por família de curva
curve_styles = {
    'transition': {'color': 'darkred', 'linestyle': '-', 'linewidth': 1.5},
    'drift': {'color': 'navy', 'linestyle': '-', 'linewidth': 1.5},
    'reference': {'color': 'gray', 'linestyle': '--', 'linewidth': 1.0},
}


def _style_for(curve):
    if curve.kind == 'reference':
        return curve_styles['reference']
    if curve.curve_id.endswith('_drift'):
        return curve_styles['drift']
    return curve_styles['transition']


def save_phase_diagram_svg(diagram, output_path):
    """
    Desenha as curvas do diagrama e os pontos especiais e salva em SVG.

    Args:
        diagram (PhaseDiagram): Diagrama calculado
        output_path (str): Caminho do arquivo .svg

    Returns:
        tuple: (sucesso, caminho do arquivo ou mensagem de erro)
    """
    try:
        directory = os.path.dirname(output_path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        fig = plt.figure(figsize=(8, 8))
        ax = fig.add_subplot(1, 1, 1)
        for curve in diagram.curves:
            if not curve.points:
                continue
            ps = [point[0] for point in curve.points]
            qs = [point[1] for point in curve.points]
            if len(curve.points) == 1:
                ax.plot(ps, qs, 'ko', markersize=4, label=curve.curve_id)
            else:
                ax.plot(ps, qs, label=curve.curve_id, **_style_for(curve))

        special = diagram.special
        for name in ('P0', 'Q0'):
            if name in special:
                ax.plot(*special[name], 'ks', markersize=4)
                ax.annotate(name, special[name], textcoords='offset points', xytext=(4, 4))

        ax.set_xlim(*diagram.p_range)
        ax.set_xlabel('p')
        ax.set_ylabel('q')
        ax.set_title(f'kappa = {diagram.kappa:g}, a = {diagram.a:g}')
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize='x-small', loc='best')
        fig.savefig(output_path, format='svg', metadata={'Date': None})
        plt.close(fig)
        logger.info("Diagrama de fases salvo em %s", output_path)
        return True, output_path
    except (OSError, ValueError) as e:
        logger.error("Falha ao salvar o diagrama de fases: %s", e)
        return False, str(e)
