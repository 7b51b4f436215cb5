from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Logger settings
    app_log_level: str = "INFO"
    app_debug: bool = False

    # Numeric settings
    app_tolerance: float = 1e-12
    app_rational_max_denominator: int = 1_000_000

    # Oracle settings
    app_enumeration_cap: int = 20
    app_grid_points: int = 1001
    app_measure_samples: int = 11
    app_seed: int = 0
    app_random_profiles: int = 20
    app_random_max_n: int = 8

    # Rendering settings
    app_precision: int = 5

    model_config = SettingsConfigDict(
        extra="allow",
        env_file=".env",
        env_file_encoding="utf-8",
    )


settings = Settings()
