"""
Configurações gerais do solucionador de problemas de valor inicial
"""

# Configurações das séries truncadas
SERIES_CONFIG = {
    'default_order': 20,  # Ordem de truncamento N em t
    'max_order': 60,
}

# Configurações do sistema de compatibilidade
COMPAT_CONFIG = {
    'default_free_value': '0',  # Valor padrão dos parâmetros livres
}

# Configurações do certificado de resíduo
CERTIFICATE_CONFIG = {
    'log10_t_start': -1.0,
    'log10_t_stop': -3.0,
    'samples': 11,  # t = 10^-1, 10^-1.2, ..., 10^-3
    'slope_tolerance': 0.2,
    'extra_orders': 6,  # Ordens além da resolvida na expansão exata do resíduo
    'zero_threshold': 1e-300,
}

# Configurações da integração numérica
INTEGRATION_CONFIG = {
    't0': 0.1,
    't_max': 1.5,
    'reltol': 1e-10,
    'abstol': 1e-12,
    'method': 'DOP853',  # Runge-Kutta explícito de ordem 8 com controle embutido
    'samples': 50,
    'positivity_floor': 0.0,  # Menor autovalor admitido para P
}

# Configurações de relatório
REPORT_CONFIG = {
    'emit': 'text',  # 'text', 'json' ou 'csv'
    'precision_env_var': 'COHOM1_PRECISION',  # Limita denominadores só na exibição
}

# Configurações do catálogo embutido
CATALOG_CONFIG = {
    'directory': 'catalog',
    'example3_default_n': 2,
}
