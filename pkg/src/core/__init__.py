from core.logger import register_levels

register_levels()
