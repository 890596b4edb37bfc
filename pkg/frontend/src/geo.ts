/** Client-side geodesy for display: distance and bearing readouts. */

const EARTH_RADIUS_M = 6_371_000;

export function haversineMeters(
  aLat: number, aLon: number, bLat: number, bLon: number,
): number {
  const phi1 = (aLat * Math.PI) / 180;
  const phi2 = (bLat * Math.PI) / 180;
  const dPhi = ((bLat - aLat) * Math.PI) / 180;
  const dLambda = ((bLon - aLon) * Math.PI) / 180;
  const h = Math.sin(dPhi / 2) ** 2
    + Math.cos(phi1) * Math.cos(phi2) * Math.sin(dLambda / 2) ** 2;
  const clamped = Math.min(1, h);
  return EARTH_RADIUS_M * 2 * Math.atan2(Math.sqrt(clamped), Math.sqrt(1 - clamped));
}

/** Initial great-circle bearing from a to b, degrees clockwise from north. */
export function initialBearingDeg(
  aLat: number, aLon: number, bLat: number, bLon: number,
): number {
  const phi1 = (aLat * Math.PI) / 180;
  const phi2 = (bLat * Math.PI) / 180;
  const dLambda = ((bLon - aLon) * Math.PI) / 180;
  const y = Math.sin(dLambda) * Math.cos(phi2);
  const x = Math.cos(phi1) * Math.sin(phi2)
    - Math.sin(phi1) * Math.cos(phi2) * Math.cos(dLambda);
  return ((Math.atan2(y, x) * 180) / Math.PI + 360) % 360;
}

const COMPASS = ["N", "NE", "E", "SE", "S", "SW", "W", "NW"] as const;

export function compassPoint(bearingDeg: number): string {
  const index = Math.round(((bearingDeg % 360) + 360) % 360 / 45) % 8;
  return COMPASS[index]!;
}

export function formatDistance(meters: number): string {
  if (meters < 1000) return `${Math.round(meters)} m`;
  return `${(meters / 1000).toFixed(1)} km`;
}
