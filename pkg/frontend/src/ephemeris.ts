/**
 * Sun/moon state for shading. Mirrors the server's model: both bodies
 * run circular orbits in the xy plane, phase 0 = new moon, 1 = full.
 * The viewer evaluates this locally from the orbit block of whatever
 * config the session was opened with.
 */

export interface OrbitParams {
  sun_period_s: number;
  moon_period_s: number;
  moon_radius_m: number;
}

export const DEFAULT_ORBIT: OrbitParams = {
  sun_period_s: 1200.0,
  moon_period_s: 400.0,
  moon_radius_m: 2.5e7,
};

export interface EphemerisState {
  sunDirection: [number, number, number];
  moonPosition: [number, number, number];
  /** illuminated fraction, 0 new .. 1 full */
  moonPhase: number;
}

export function ephemerisAt(timeS: number, orbit: OrbitParams = DEFAULT_ORBIT): EphemerisState {
  if (!Number.isFinite(timeS)) throw new Error("time must be finite");
  const sunAngle = (2 * Math.PI * timeS) / orbit.sun_period_s;
  const moonAngle = (2 * Math.PI * timeS) / orbit.moon_period_s;
  const sun: [number, number, number] = [Math.cos(sunAngle), Math.sin(sunAngle), 0];
  const moonDir: [number, number, number] = [Math.cos(moonAngle), Math.sin(moonAngle), 0];
  const dot = sun[0] * moonDir[0] + sun[1] * moonDir[1] + sun[2] * moonDir[2];
  const phase = Math.min(1, Math.max(0, (1 - dot) / 2));
  return {
    sunDirection: sun,
    moonPosition: [
      moonDir[0] * orbit.moon_radius_m,
      moonDir[1] * orbit.moon_radius_m,
      moonDir[2] * orbit.moon_radius_m,
    ],
    moonPhase: phase,
  };
}
